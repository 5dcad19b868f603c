#pragma once

#include <stdexcept>

namespace wesma {

// A computation that cannot proceed numerically: singular solve, undefined
// statistic. Distinct from bad arguments so callers (notably the CLI) can
// map it to its own exit status.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace wesma
