#include "wesma/wavelet.hpp"

#include <cmath>
#include <stdexcept>

namespace wesma {

namespace {

std::vector<double> qmf_highpass(const std::vector<double>& dec_low) {
    const std::size_t len = dec_low.size();
    std::vector<double> high(len);
    for (std::size_t k = 0; k < len; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        high[k] = sign * dec_low[len - 1 - k];
    }
    return high;
}

std::vector<double> reversed(const std::vector<double>& taps) {
    return {taps.rbegin(), taps.rend()};
}

bool is_power_of_two(std::size_t v) {
    return v != 0 && (v & (v - 1)) == 0;
}

} // namespace

WaveletFilter wavelet_filter(const std::string& name) {
    WaveletFilter f;
    f.name = name;
    if (name == "haar") {
        const double s = 1.0 / std::sqrt(2.0);
        f.dec_low = {s, s};
    } else if (name == "db2") {
        const double r3 = std::sqrt(3.0);
        const double s = 4.0 * std::sqrt(2.0);
        f.dec_low = {(1.0 + r3) / s, (3.0 + r3) / s, (3.0 - r3) / s, (1.0 - r3) / s};
    } else {
        throw std::invalid_argument("unknown wavelet filter: " + name);
    }
    f.dec_high = qmf_highpass(f.dec_low);
    f.rec_low = reversed(f.dec_low);
    f.rec_high = reversed(f.dec_high);
    return f;
}

Signal dilated_circular_convolve(std::span<const double> x, std::span<const double> taps,
                                 std::size_t dilation) {
    const std::size_t n = x.size();
    if (n == 0 || taps.empty()) {
        throw std::invalid_argument("empty signal or taps");
    }
    if (!is_power_of_two(dilation)) {
        throw std::invalid_argument("dilation must be a power of two");
    }
    if (dilation * (taps.size() - 1) >= n) {
        throw std::invalid_argument("dilation exceeds signal length");
    }
    Signal y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        std::size_t idx = i;
        for (std::size_t k = 0; k < taps.size(); ++k) {
            sum += taps[k] * x[idx];
            idx = (idx >= dilation) ? idx - dilation : idx + n - dilation;
        }
        y[i] = sum;
    }
    return y;
}

UwtDecomposition uwt_forward(const Signal& x, const WaveletFilter& filter, int levels) {
    const std::size_t n = x.size();
    if (n == 0) {
        throw std::invalid_argument("empty signal");
    }
    if (levels < 1 || (static_cast<std::size_t>(1) << levels) > n) {
        throw std::invalid_argument("insufficient length for J levels");
    }
    UwtDecomposition dec;
    dec.levels = levels;
    dec.filter_name = filter.name;
    dec.details.reserve(static_cast<std::size_t>(levels));
    Signal approx = x;
    for (int j = 1; j <= levels; ++j) {
        const std::size_t dilation = static_cast<std::size_t>(1) << (j - 1);
        dec.details.push_back(dilated_circular_convolve(approx, filter.dec_high, dilation));
        approx = dilated_circular_convolve(approx, filter.dec_low, dilation);
    }
    dec.approx = std::move(approx);
    return dec;
}

Signal uwt_inverse(const UwtDecomposition& dec, const WaveletFilter& filter) {
    if (dec.filter_name != filter.name) {
        throw std::invalid_argument("filter name does not match decomposition");
    }
    const std::size_t n = dec.approx.size();
    if (n == 0 || dec.levels < 1 ||
        dec.details.size() != static_cast<std::size_t>(dec.levels) ||
        (static_cast<std::size_t>(1) << dec.levels) > n) {
        throw std::invalid_argument("malformed decomposition");
    }
    for (const Signal& band : dec.details) {
        if (band.size() != n) {
            throw std::invalid_argument("malformed decomposition");
        }
    }
    const std::size_t len = filter.length();
    Signal approx = dec.approx;
    for (int j = dec.levels; j >= 1; --j) {
        const std::size_t dilation = static_cast<std::size_t>(1) << (j - 1);
        const Signal lo = dilated_circular_convolve(approx, filter.rec_low, dilation);
        const Signal hi =
            dilated_circular_convolve(dec.details[static_cast<std::size_t>(j - 1)],
                                      filter.rec_high, dilation);
        // Convolving with the reversed filters correlates with the analysis
        // pair up to a phase advance of dilation*(len-1) samples; undoing it
        // here makes the cascade an exact identity.
        const std::size_t shift = (dilation * (len - 1)) % n;
        Signal prev(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t src = (i + shift) % n;
            prev[i] = 0.5 * (lo[src] + hi[src]);
        }
        approx = std::move(prev);
    }
    return approx;
}

int max_levels(std::size_t n, const WaveletFilter& filter) {
    int best = 0;
    for (int j = 1; j < 63; ++j) {
        const std::size_t dilation = static_cast<std::size_t>(1) << (j - 1);
        if ((static_cast<std::size_t>(1) << j) > n) {
            break;
        }
        if (dilation * (filter.length() - 1) >= n) {
            break;
        }
        best = j;
    }
    return best;
}

} // namespace wesma
