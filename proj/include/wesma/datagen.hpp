#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wesma/textprep.hpp"
#include "wesma/wavelet.hpp"

namespace wesma {

enum class SignalKind { blocks, bumps, doppler, sine };

SignalKind signal_kind_from_string(const std::string& name);
std::string to_string(SignalKind kind);

// Closed-form shrinkage test signals, peak-normalized to max|x| = 1. The
// seed is part of the interface for future stochastic kinds; the closed-form
// kinds ignore it.
Signal gen_signal(SignalKind kind, std::size_t n, std::uint64_t seed);

// Empty target means "clean": no noise added, sigma 0.
struct NoiseSpec {
    std::optional<double> target_snr_db;
    std::uint64_t seed = 0;
};

// sigma = sqrt(mean(x^2) / 10^(target/10)); returns (noisy, sigma).
std::pair<Signal, double> add_awgn(const Signal& x, const NoiseSpec& spec);

struct LanguageSpec {
    std::string lang;
    std::size_t vocab_size = 0;
    std::size_t doc_count = 0;
};

struct CorpusSpec {
    std::vector<LanguageSpec> languages;
    std::size_t doc_length_mean = 40;
    double typo_rate = 0.0;
    double threat_rate = 0.0;
    std::uint64_t seed = 0;
};

// Synthetic labeled documents: per-language vocabulary over its script,
// Zipf unigram sampling for legit documents, a shifted high-frequency
// vocabulary subset for threat documents, seeded per-token typos.
std::vector<RawDocument> gen_corpus(const CorpusSpec& spec);

} // namespace wesma
