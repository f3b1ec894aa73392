#pragma once

#include <optional>
#include <vector>

#include "constel/geometry.hpp"

namespace constel {

/// Ordered hover positions forming a rectangular polar lattice. Symbol index i
/// (an n-bit field) carries channel_mhz[i]; the spacings are the lattice pitch.
struct Constellation {
    std::vector<PolarPoint> symbols;
    double delta_theta_deg = 0.0;
    double delta_rho_m = 0.0;
    std::vector<double> channel_mhz;  // symbol index -> channel

    int size() const { return static_cast<int>(symbols.size()); }
};

/// True when every symbol pair differs by integer multiples of the spacings
/// on each axis, within the given relative tolerance.
bool on_lattice(const Constellation& c, double rel_tol = 1e-9);

/// Full invariant check: positive spacings, distinct in-bounds symbols, lattice
/// alignment, and a channel map that is a bijection. Throws std::invalid_argument.
void validate(const Constellation& c, const FieldOfView& fov, double dist_max_m);

std::optional<int> symbol_for_channel(const Constellation& c, double channel_mhz);

}  // namespace constel
