#pragma once

#include <stdexcept>

namespace constel {

/// A numerical or combinatorial guard tripped: subset budget exceeded,
/// flight did not settle within max_sim_time, and similar.
struct guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace constel
