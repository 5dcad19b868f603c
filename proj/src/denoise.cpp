#include "wesma/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace wesma {

ThresholdRule threshold_rule_from_string(const std::string& name) {
    if (name == "hard") {
        return ThresholdRule::hard;
    }
    if (name == "soft") {
        return ThresholdRule::soft;
    }
    throw std::invalid_argument("unknown threshold rule: " + name);
}

std::string to_string(ThresholdRule rule) {
    return rule == ThresholdRule::hard ? "hard" : "soft";
}

double mad_sigma(std::span<const double> finest_detail) {
    if (finest_detail.empty()) {
        throw std::invalid_argument("empty detail band");
    }
    std::vector<double> mags(finest_detail.size());
    for (std::size_t i = 0; i < finest_detail.size(); ++i) {
        mags[i] = std::fabs(finest_detail[i]);
    }
    std::sort(mags.begin(), mags.end());
    const std::size_t n = mags.size();
    const double median =
        (n % 2 == 1) ? mags[n / 2] : 0.5 * (mags[n / 2 - 1] + mags[n / 2]);
    return median / 0.6745;
}

double universal_threshold(double sigma, std::size_t n) {
    if (sigma < 0.0) {
        throw std::invalid_argument("negative sigma");
    }
    if (n < 1) {
        throw std::invalid_argument("n must be positive");
    }
    return sigma * std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

double apply_threshold(double c, double t, ThresholdRule rule) {
    if (t < 0.0) {
        throw std::invalid_argument("negative threshold");
    }
    if (rule == ThresholdRule::hard) {
        return std::fabs(c) > t ? c : 0.0;
    }
    const double shrunk = std::fabs(c) - t;
    if (shrunk <= 0.0) {
        return 0.0;
    }
    return c > 0.0 ? shrunk : -shrunk;
}

double snr_db(const Signal& reference, const Signal& estimate) {
    if (reference.size() != estimate.size()) {
        throw std::invalid_argument("length mismatch");
    }
    double signal_energy = 0.0;
    double residual_energy = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        signal_energy += reference[i] * reference[i];
        const double diff = reference[i] - estimate[i];
        residual_energy += diff * diff;
    }
    if (signal_energy == 0.0) {
        throw std::invalid_argument("all-zero reference");
    }
    if (residual_energy < 1e-300) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(signal_energy / residual_energy);
}

std::pair<Signal, DenoiseReport> denoise(const Signal& x, const DenoiseConfig& cfg,
                                         const Signal* reference) {
    if (cfg.known_sigma && *cfg.known_sigma < 0.0) {
        throw std::invalid_argument("negative sigma");
    }
    if (cfg.manual_threshold && *cfg.manual_threshold < 0.0) {
        throw std::invalid_argument("negative threshold");
    }
    const WaveletFilter filter = wavelet_filter(cfg.filter_name);
    UwtDecomposition dec = uwt_forward(x, filter, cfg.levels);

    DenoiseReport report;
    report.sigma_used = cfg.known_sigma ? *cfg.known_sigma : mad_sigma(dec.details.front());
    report.threshold_used = cfg.manual_threshold
                                ? *cfg.manual_threshold
                                : universal_threshold(report.sigma_used, x.size());

    for (Signal& band : dec.details) {
        for (double& c : band) {
            c = apply_threshold(c, report.threshold_used, cfg.rule);
        }
    }
    Signal out = uwt_inverse(dec, filter);

    if (reference != nullptr) {
        report.input_snr_db = snr_db(*reference, x);
        report.output_snr_db = snr_db(*reference, out);
        if (std::isfinite(*report.input_snr_db) && std::isfinite(*report.output_snr_db)) {
            report.improvement_db = *report.output_snr_db - *report.input_snr_db;
        }
    }
    return {std::move(out), report};
}

} // namespace wesma
