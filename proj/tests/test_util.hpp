#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "wesma/rng.hpp"
#include "wesma/wavelet.hpp"

namespace wesma::test {

inline Signal random_signal(std::size_t n, std::uint64_t seed, double lo = -1.0,
                            double hi = 1.0) {
    Rng rng(seed);
    Signal x(n);
    for (double& v : x) {
        v = rng.uniform(lo, hi);
    }
    return x;
}

inline double max_abs_error(const Signal& a, const Signal& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::fabs(a[i] - b[i]));
    }
    return worst;
}

inline Signal rotated(const Signal& x, std::size_t shift) {
    const std::size_t n = x.size();
    Signal out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[(i + shift) % n] = x[i];
    }
    return out;
}

} // namespace wesma::test
