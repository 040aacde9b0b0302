// peaks.cpp: local maxima, topographic prominence and half-prominence widths

#include "dressedspec/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dressedspec {

namespace {

RealVector log_spectrum(const RealVector& s)
{
    return s.unaryExpr([](double v) { return std::log10(std::max(v, 1e-300)); });
}

// Linear interpolation of the abscissa where s crosses `level`, walking from
// `start` in direction `dir`. Returns the grid end if no crossing exists.
double crossing(const RealVector& x, const RealVector& s, Index start, int dir, double level)
{
    Index i = start;
    while (true) {
        const Index j = i + dir;
        if (j < 0 || j >= s.size()) {
            return x(i);
        }
        if (s(j) <= level) {
            const double t = (s(i) - level) / (s(i) - s(j));
            return x(i) + t * (x(j) - x(i));
        }
        i = j;
    }
}

} // namespace

PeakSet detect_peaks(const Spectrum& spectrum, double min_prominence, double min_separation)
{
    const RealVector& x = spectrum.omega;
    const RealVector& s = spectrum.values;
    const Index n = s.size();
    PeakSet found;
    if (n < 3) {
        return found;
    }
    const RealVector y = log_spectrum(s);

    struct Candidate {
        Index index;
        double prominence;
        double base;
    };
    std::vector<Candidate> candidates;

    for (Index i = 1; i + 1 < n; ++i) {
        if (!(y(i) > y(i - 1)) || s(i) <= 0.0) continue;
        // Plateaus: walk to the last equal sample; the peak sits at the middle.
        Index r = i;
        while (r + 1 < n && y(r + 1) == y(i)) ++r;
        if (r + 1 >= n || !(y(r + 1) < y(i))) {
            i = r;
            continue;
        }
        const Index mid = (i + r) / 2;

        double left_min = y(i);
        for (Index k = i - 1; k >= 0; --k) {
            if (y(k) > y(i)) break;
            left_min = std::min(left_min, y(k));
        }
        double right_min = y(i);
        for (Index k = r + 1; k < n; ++k) {
            if (y(k) > y(i)) break;
            right_min = std::min(right_min, y(k));
        }
        const double base = std::max(left_min, right_min);
        candidates.push_back({mid, y(i) - base, base});
        i = r;
    }

    std::erase_if(candidates, [&](const Candidate& c) { return c.prominence < min_prominence; });

    // Greedy separation filter, tallest first.
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return s(candidates[a].index) > s(candidates[b].index);
    });
    std::vector<Candidate> kept;
    for (std::size_t k : order) {
        const double c = x(candidates[k].index);
        const bool clash = std::any_of(kept.begin(), kept.end(), [&](const Candidate& o) {
            return std::abs(x(o.index) - c) < min_separation;
        });
        if (!clash) kept.push_back(candidates[k]);
    }

    for (const Candidate& c : kept) {
        Peak p;
        const Index i = c.index;
        p.height = s(i);
        p.prominence = c.prominence;
        p.center = x(i);
        // Parabolic refinement on the log curve, confined to half a grid step.
        if (i > 0 && i + 1 < n) {
            const double denom = y(i - 1) - 2.0 * y(i) + y(i + 1);
            if (denom < 0.0) {
                const double shift = std::clamp(0.5 * (y(i - 1) - y(i + 1)) / denom, -0.5, 0.5);
                p.center += shift * (x(i + 1) - x(i));
            }
        }
        const double level = 0.5 * (s(i) + std::pow(10.0, c.base));
        p.half_width = 0.5 * (crossing(x, s, i, +1, level) - crossing(x, s, i, -1, level));
        found.push_back(p);
    }
    std::sort(found.begin(), found.end(), [](const Peak& a, const Peak& b) { return a.center < b.center; });
    return found;
}

PeakSet sidebands(const PeakSet& peaks, double exclude_below)
{
    PeakSet out;
    std::copy_if(peaks.begin(), peaks.end(), std::back_inserter(out),
                 [&](const Peak& p) { return std::abs(p.center) > exclude_below; });
    return out;
}

} // namespace dressedspec
