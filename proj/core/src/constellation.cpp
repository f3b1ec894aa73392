#include "constel/constellation.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace constel {

namespace {

bool integer_multiple(double diff, double delta, double rel_tol) {
    const double ratio = diff / delta;
    return std::abs(ratio - std::round(ratio)) <= rel_tol * std::max(1.0, std::abs(ratio));
}

}  // namespace

bool on_lattice(const Constellation& c, double rel_tol) {
    if (c.delta_theta_deg <= 0.0 || c.delta_rho_m <= 0.0) {
        return false;
    }
    for (std::size_t i = 0; i + 1 < c.symbols.size(); ++i) {
        for (std::size_t j = i + 1; j < c.symbols.size(); ++j) {
            if (!integer_multiple(c.symbols[i].theta_deg - c.symbols[j].theta_deg,
                                  c.delta_theta_deg, rel_tol) ||
                !integer_multiple(c.symbols[i].rho_m - c.symbols[j].rho_m, c.delta_rho_m,
                                  rel_tol)) {
                return false;
            }
        }
    }
    return true;
}

void validate(const Constellation& c, const FieldOfView& fov, double dist_max_m) {
    if (c.symbols.empty()) {
        throw std::invalid_argument("constellation: no symbols");
    }
    if (c.delta_theta_deg <= 0.0 || c.delta_rho_m <= 0.0) {
        throw std::invalid_argument("constellation: spacings must be positive");
    }
    if (c.channel_mhz.size() != c.symbols.size()) {
        throw std::invalid_argument("constellation: channel map must cover every symbol");
    }
    std::set<double> channels(c.channel_mhz.begin(), c.channel_mhz.end());
    if (channels.size() != c.channel_mhz.size()) {
        throw std::invalid_argument("constellation: channel map is not a bijection");
    }
    for (std::size_t i = 0; i < c.symbols.size(); ++i) {
        const PolarPoint& s = c.symbols[i];
        if (!(s.rho_m >= 0.0) || s.rho_m > dist_max_m || !fov.contains(s.theta_deg)) {
            throw std::invalid_argument("constellation: symbol " + std::to_string(i) +
                                        " outside field of view or sensing range");
        }
        for (std::size_t j = i + 1; j < c.symbols.size(); ++j) {
            if (s.theta_deg == c.symbols[j].theta_deg && s.rho_m == c.symbols[j].rho_m) {
                throw std::invalid_argument("constellation: duplicate symbol positions " +
                                            std::to_string(i) + " and " + std::to_string(j));
            }
        }
    }
    if (!on_lattice(c)) {
        throw std::invalid_argument(
            "constellation: symbols do not sit on the (delta_theta, delta_rho) lattice");
    }
}

std::optional<int> symbol_for_channel(const Constellation& c, double channel_mhz) {
    for (std::size_t i = 0; i < c.channel_mhz.size(); ++i) {
        if (c.channel_mhz[i] == channel_mhz) {
            return static_cast<int>(i);
        }
    }
    return std::nullopt;
}

}  // namespace constel
