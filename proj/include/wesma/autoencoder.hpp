#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wesma/embed.hpp"
#include "wesma/linalg.hpp"
#include "wesma/wavelet.hpp"

namespace wesma {

// Per-feature keep probabilities with a trailing bias slot pinned to 1.
struct CorruptionProfile {
    std::vector<double> keep_prob;

    std::size_t feature_count() const { return keep_prob.empty() ? 0 : keep_prob.size() - 1; }
};

CorruptionProfile uniform_corruption_profile(std::size_t features, double drop_prob);

struct SemanticNoiseConfig {
    std::vector<std::string> seed_terms;
    double base_p0 = 0.3;
    double boost_alpha = 1.0;
    double p_max = 0.9;
};

// Features similar to a seed term get corrupted more:
// p_i = min(p_max, p0 * (1 + alpha * s_i)) with s_i the clipped best cosine
// against the seed embeddings.
CorruptionProfile semantic_corruption_profile(const Vocabulary& vocab,
                                              const EmbeddingMatrix& embeddings,
                                              const SemanticNoiseConfig& cfg);

// One linear denoising layer: weights map the bias-augmented input back to
// the D target features.
struct MdaLayer {
    Matrix weights; // D x (D+1)
    double lambda = 0.0;
};

enum class ReprMode { concat, last };

ReprMode repr_mode_from_string(const std::string& name);
std::string to_string(ReprMode mode);

struct WesmaModel {
    std::vector<MdaLayer> layers;
    CorruptionProfile profile;
    ReprMode repr_mode = ReprMode::concat;

    std::size_t feature_count() const {
        return layers.empty() ? 0 : layers.front().weights.rows;
    }
};

// Expected moments of the corrupted scatter, closed form over the infinite
// corruption distribution. X is D x n (one example per column); returns
// (P, Q) with P = D x (D+1) and Q = (D+1) x (D+1).
std::pair<Matrix, Matrix> marginalized_moments(const Matrix& x,
                                               std::span<const double> keep_prob);

// Solve W (Q + lambda I) = P row by row (Gaussian elimination with partial
// pivoting). Throws "regularization required" when the system is singular.
MdaLayer fit_mda_layer(const Matrix& x, std::span<const double> keep_prob, double lambda);

// h_0 = X; W_l fit on h_{l-1}; h_l = tanh(W_l * augment(h_{l-1})).
WesmaModel stack_fit(const Matrix& x, const CorruptionProfile& profile, int layer_count,
                     double lambda, ReprMode mode = ReprMode::concat);

// concat: [x, h_1(x), ..., h_L(x)]; last: h_L(x).
std::vector<double> transform(const WesmaModel& model, std::span<const double> x);
Matrix transform_batch(const WesmaModel& model, const Matrix& x);

// (1/D) * || W_1 * augment(x) - x ||^2, the first layer's pre-nonlinearity
// reconstruction.
double reconstruction_error(const WesmaModel& model, std::span<const double> x);

// m fixed unit projection directions (rows), drawn once from the seed.
Matrix signal_projections(std::size_t dim, std::size_t count, std::uint64_t seed);

// One signal per projection: sample t is the embedding of token t projected
// onto the direction, periodically extended or truncated to target_length
// (a power of two >= 4).
std::vector<Signal> token_signal(std::span<const int> tokens, const EmbeddingMatrix& embeddings,
                                 const Matrix& projections, std::size_t target_length);
std::vector<Signal> token_signal(std::span<const int> tokens, const EmbeddingMatrix& embeddings,
                                 std::size_t projections, std::size_t target_length,
                                 std::uint64_t seed);

// ln(1 + mean(value^2)) per detail band plus the approximation: J+1 values.
std::vector<double> subband_energy_features(const UwtDecomposition& dec);

// Standardization fitted on training rows; zero-variance features are
// dropped.
struct FeatureScaler {
    std::vector<std::size_t> kept;
    std::vector<double> mean;
    std::vector<double> stdev;
};

FeatureScaler fit_scaler(const Matrix& feature_rows); // one row per example
std::vector<double> scale_features(const FeatureScaler& scaler, std::span<const double> features);

// Representation concatenated with the standardized subband features.
std::vector<double> fuse(std::span<const double> representation,
                         std::span<const double> subband_features,
                         const FeatureScaler& scaler);

} // namespace wesma
