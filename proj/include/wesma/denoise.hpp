#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>

#include "wesma/wavelet.hpp"

namespace wesma {

enum class ThresholdRule { hard, soft };

ThresholdRule threshold_rule_from_string(const std::string& name);
std::string to_string(ThresholdRule rule);

struct DenoiseConfig {
    std::string filter_name = "haar";
    int levels = 5;
    ThresholdRule rule = ThresholdRule::soft;
    std::optional<double> known_sigma;      // empty: MAD estimate from the finest band
    std::optional<double> manual_threshold; // empty: universal threshold
};

// SNR fields stay empty when no clean reference was supplied.
struct DenoiseReport {
    double sigma_used = 0.0;
    double threshold_used = 0.0;
    std::optional<double> input_snr_db;
    std::optional<double> output_snr_db;
    std::optional<double> improvement_db;
};

// median(|d|) / 0.6745; even-length medians average the two central order
// statistics.
double mad_sigma(std::span<const double> finest_detail);

// sigma * sqrt(2 ln N).
double universal_threshold(double sigma, std::size_t n);

// hard: zero below t; soft: shrink magnitude by t.
double apply_threshold(double c, double t, ThresholdRule rule);

// 10*log10(sum ref^2 / sum (ref-est)^2); +infinity when the residual energy
// vanishes (< 1e-300).
double snr_db(const Signal& reference, const Signal& estimate);

// Forward transform, one global threshold over every detail band (the
// approximation is never touched), inverse transform.
std::pair<Signal, DenoiseReport> denoise(const Signal& x, const DenoiseConfig& cfg,
                                         const Signal* reference = nullptr);

} // namespace wesma
