#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace wesma {

// 1-D signal, unitless amplitude. Samples must stay finite; IO and the
// generators enforce that at the boundaries.
using Signal = std::vector<double>;

// Orthonormal analysis/synthesis filter quadruple. dec_high is derived from
// dec_low by the quadrature-mirror relation, rec_* are the time reversals.
struct WaveletFilter {
    std::string name;
    std::vector<double> dec_low;
    std::vector<double> dec_high;
    std::vector<double> rec_low;
    std::vector<double> rec_high;

    std::size_t length() const { return dec_low.size(); }
};

// Supported names: "haar", "db2".
WaveletFilter wavelet_filter(const std::string& name);

// Redundant multiscale decomposition: J detail bands plus the coarsest
// approximation, all of the input length (no decimation). Boundary handling
// is periodic, always.
struct UwtDecomposition {
    int levels = 0;
    std::vector<Signal> details; // d_1 .. d_J
    Signal approx;               // a_J
    std::string filter_name;
    std::string boundary = "periodic";

    std::size_t length() const { return approx.size(); }
};

// y[n] = sum_k taps[k] * x[(n - dilation*k) mod N]. dilation must be a power
// of two with dilation*(len(taps)-1) < N.
Signal dilated_circular_convolve(std::span<const double> x, std::span<const double> taps,
                                 std::size_t dilation);

// A-trous cascade: at level j the filters act with dilation 2^(j-1) on the
// previous approximation.
UwtDecomposition uwt_forward(const Signal& x, const WaveletFilter& filter, int levels);

// Level-wise averaged synthesis; exact inverse of uwt_forward up to
// floating-point roundoff.
Signal uwt_inverse(const UwtDecomposition& dec, const WaveletFilter& filter);

// Largest J usable for a length-n signal with this filter (both the level
// bound 2^J <= n and the dilation bound of the convolution).
int max_levels(std::size_t n, const WaveletFilter& filter);

} // namespace wesma
