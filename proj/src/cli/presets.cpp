// presets.cpp: bundled configurations (three-atom triangles, single atom, dimer)

#include "dressedspec/cli/presets.hpp"

#include <algorithm>

namespace dressedspec::cli {

namespace {

const char* kEquilateral = R"(name: equilateral_fig1
layout:
  mode: pairwise
  atoms: 3
  kr: 0.01
  cos_theta: magic
drive:
  rabi: 200
  detuning: 0
spectrum:
  method: fourier
  tau_step: 2.5e-4
  tau_length: 40
  omega_max: 700
  omega_step: 0.05
peaks:
  min_prominence: 0.1
  min_separation: 2
  tolerance: 1
)";

// Apex at site 2: sides 2-0 and 2-1 have kr = 0.01 at a right angle, so 0-1 is 0.01 * sqrt(2).
const char* kIsosceles = R"(name: isosceles_fig2
layout:
  mode: pairwise
  atoms: 3
  kr:
    - [0, 0.014142135623730951, 0.01]
    - [0.014142135623730951, 0, 0.01]
    - [0.01, 0.01, 0]
  cos_theta: magic
drive:
  rabi: 200
  detuning: 0
spectrum:
  method: fourier
  tau_step: 2.5e-4
  tau_length: 40
  omega_max: 700
  omega_step: 0.05
peaks:
  min_prominence: 0.1
  min_separation: 2
  tolerance: 1
)";

const char* kMollow = R"(name: mollow
layout:
  mode: geometric
  positions:
    - [0, 0, 0]
  dipole: [0, 0, 1]
drive:
  rabi: 200
  detuning: 0
spectrum:
  method: fourier
  tau_step: 2.5e-4
  tau_length: 40
  omega_max: 700
  omega_step: 0.05
peaks:
  min_prominence: 0.1
  min_separation: 2
  tolerance: 1
)";

const char* kDimer = R"(name: dimer_magic
layout:
  mode: pairwise
  atoms: 2
  kr: 0.01
  cos_theta: magic
drive:
  rabi: 200
  detuning: 0
spectrum:
  method: fourier
  tau_step: 2.5e-4
  tau_length: 40
  omega_max: 700
  omega_step: 0.05
peaks:
  min_prominence: 0.1
  min_separation: 2
  tolerance: 1
)";

} // namespace

const std::vector<Preset>& presets()
{
    static const std::vector<Preset> all{
        {"equilateral_fig1", "three atoms, all pairs kr = 0.01 at the magic angle, rabi 200", kEquilateral},
        {"isosceles_fig2", "three atoms, two sides kr = 0.01 at a right angle, magic angle, rabi 200", kIsosceles},
        {"mollow", "single resonantly driven atom, rabi 200", kMollow},
        {"dimer_magic", "two atoms at kr = 0.01, magic angle, rabi 200", kDimer},
    };
    return all;
}

std::optional<Preset> find_preset(const std::string& name)
{
    const auto& all = presets();
    const auto it = std::find_if(all.begin(), all.end(), [&](const Preset& p) { return p.name == name; });
    if (it == all.end()) return std::nullopt;
    return *it;
}

} // namespace dressedspec::cli
