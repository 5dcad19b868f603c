#include "wesma/autoencoder.hpp"

#include <cmath>
#include <stdexcept>

#include "wesma/errors.hpp"
#include "wesma/rng.hpp"

namespace wesma {

namespace {

void check_profile(const CorruptionProfile& profile) {
    if (profile.keep_prob.empty()) {
        throw std::invalid_argument("empty corruption profile");
    }
    for (double q : profile.keep_prob) {
        if (!(q > 0.0) || q > 1.0) {
            throw std::invalid_argument("keep probabilities must lie in (0, 1]");
        }
    }
    if (profile.keep_prob.back() != 1.0) {
        throw std::invalid_argument("bias slot must keep probability 1");
    }
}

double safe_cosine(std::span<const double> u, std::span<const double> v) {
    double uu = 0.0;
    double vv = 0.0;
    double uv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        uu += u[i] * u[i];
        vv += v[i] * v[i];
        uv += u[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) {
        return 0.0;
    }
    return uv / std::sqrt(uu * vv);
}

// W * augment(x) for a single example.
std::vector<double> layer_apply(const MdaLayer& layer, std::span<const double> x) {
    const std::size_t d = layer.weights.rows;
    if (x.size() != d) {
        throw std::invalid_argument("dimension mismatch");
    }
    std::vector<double> out(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        const double* row = layer.weights.row(i);
        double sum = row[d]; // bias column
        for (std::size_t j = 0; j < d; ++j) {
            sum += row[j] * x[j];
        }
        out[i] = sum;
    }
    return out;
}

} // namespace

CorruptionProfile uniform_corruption_profile(std::size_t features, double drop_prob) {
    if (!(drop_prob >= 0.0) || drop_prob >= 1.0) {
        throw std::invalid_argument("drop probability must lie in [0, 1)");
    }
    CorruptionProfile profile;
    profile.keep_prob.assign(features + 1, 1.0 - drop_prob);
    profile.keep_prob.back() = 1.0;
    return profile;
}

CorruptionProfile semantic_corruption_profile(const Vocabulary& vocab,
                                              const EmbeddingMatrix& embeddings,
                                              const SemanticNoiseConfig& cfg) {
    if (!(cfg.base_p0 > 0.0) || cfg.base_p0 >= 1.0 || !(cfg.p_max > 0.0) || cfg.p_max >= 1.0) {
        throw std::invalid_argument("corruption probabilities must lie in (0, 1)");
    }
    if (cfg.base_p0 > cfg.p_max) {
        throw std::invalid_argument("base_p0 must not exceed p_max");
    }
    if (cfg.boost_alpha < 0.0) {
        throw std::invalid_argument("boost must be non-negative");
    }
    if (vocab.size() != embeddings.vocab_size) {
        throw std::invalid_argument("vocabulary and embeddings disagree");
    }
    std::vector<std::size_t> seed_indices;
    seed_indices.reserve(cfg.seed_terms.size());
    for (const std::string& term : cfg.seed_terms) {
        const int idx = vocab.index_of(term);
        if (idx < 0) {
            throw std::invalid_argument("seed term out of vocabulary: " + term);
        }
        seed_indices.push_back(static_cast<std::size_t>(idx));
    }

    CorruptionProfile profile;
    profile.keep_prob.resize(vocab.size() + 1);
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        double similarity = 0.0;
        for (std::size_t seed : seed_indices) {
            const double cos = safe_cosine(embeddings.input_vector(i),
                                           embeddings.input_vector(seed));
            similarity = std::max(similarity, std::max(0.0, cos));
        }
        const double p =
            std::min(cfg.p_max, cfg.base_p0 * (1.0 + cfg.boost_alpha * similarity));
        profile.keep_prob[i] = 1.0 - p;
    }
    profile.keep_prob.back() = 1.0;
    check_profile(profile);
    return profile;
}

ReprMode repr_mode_from_string(const std::string& name) {
    if (name == "concat") {
        return ReprMode::concat;
    }
    if (name == "last") {
        return ReprMode::last;
    }
    throw std::invalid_argument("unknown representation mode: " + name);
}

std::string to_string(ReprMode mode) {
    return mode == ReprMode::concat ? "concat" : "last";
}

std::pair<Matrix, Matrix> marginalized_moments(const Matrix& x,
                                               std::span<const double> keep_prob) {
    if (x.cols == 0) {
        throw std::invalid_argument("need at least one example");
    }
    const std::size_t d = x.rows;
    if (keep_prob.size() != d + 1) {
        throw std::invalid_argument("keep probability length mismatch");
    }
    const Matrix s = scatter(augment_bias_row(x));
    Matrix q(d + 1, d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
        for (std::size_t j = 0; j <= d; ++j) {
            q.at(i, j) = (i == j) ? s.at(i, j) * keep_prob[i]
                                  : s.at(i, j) * keep_prob[i] * keep_prob[j];
        }
    }
    Matrix p(d, d + 1);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= d; ++j) {
            p.at(i, j) = s.at(i, j) * keep_prob[j];
        }
    }
    return {std::move(p), std::move(q)};
}

MdaLayer fit_mda_layer(const Matrix& x, std::span<const double> keep_prob, double lambda) {
    if (lambda < 0.0) {
        throw std::invalid_argument("lambda must be non-negative");
    }
    auto [p, q] = marginalized_moments(x, keep_prob);
    const std::size_t d = x.rows;
    Matrix system = q;
    for (std::size_t i = 0; i <= d; ++i) {
        system.at(i, i) += lambda;
    }

    LuDecomposition factors;
    try {
        factors = lu_factor(system);
    } catch (const NumericError&) {
        throw NumericError("regularization required");
    }

    MdaLayer layer;
    layer.lambda = lambda;
    layer.weights = Matrix(d, d + 1);
    std::vector<double> rhs(d + 1);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= d; ++j) {
            rhs[j] = p.at(i, j); // transposed system: (Q + lambda I) is symmetric
        }
        const std::vector<double> row = lu_solve(factors, rhs);
        for (std::size_t j = 0; j <= d; ++j) {
            layer.weights.at(i, j) = row[j];
        }
    }

    const Matrix residual_lhs = matmul(layer.weights, system);
    double residual = 0.0;
    for (std::size_t i = 0; i < residual_lhs.data.size(); ++i) {
        const double diff = residual_lhs.data[i] - p.data[i];
        residual += diff * diff;
    }
    const double p_norm = frobenius_norm(p);
    if (std::sqrt(residual) > 1e-6 * p_norm) {
        throw NumericError("layer solve residual too large");
    }
    return layer;
}

WesmaModel stack_fit(const Matrix& x, const CorruptionProfile& profile, int layer_count,
                     double lambda, ReprMode mode) {
    check_profile(profile);
    if (layer_count < 1) {
        throw std::invalid_argument("need at least one layer");
    }
    if (profile.feature_count() != x.rows) {
        throw std::invalid_argument("profile dimension mismatch");
    }
    WesmaModel model;
    model.profile = profile;
    model.repr_mode = mode;
    Matrix hidden = x;
    for (int l = 0; l < layer_count; ++l) {
        MdaLayer layer = fit_mda_layer(hidden, profile.keep_prob, lambda);
        Matrix next(hidden.rows, hidden.cols);
        const Matrix pre = matmul(layer.weights, augment_bias_row(hidden));
        for (std::size_t i = 0; i < pre.data.size(); ++i) {
            next.data[i] = std::tanh(pre.data[i]);
        }
        model.layers.push_back(std::move(layer));
        hidden = std::move(next);
    }
    return model;
}

std::vector<double> transform(const WesmaModel& model, std::span<const double> x) {
    if (model.layers.empty()) {
        throw std::invalid_argument("model has no layers");
    }
    const std::size_t d = model.feature_count();
    if (x.size() != d) {
        throw std::invalid_argument("dimension mismatch");
    }
    std::vector<double> repr;
    if (model.repr_mode == ReprMode::concat) {
        repr.assign(x.begin(), x.end());
    }
    std::vector<double> hidden(x.begin(), x.end());
    for (const MdaLayer& layer : model.layers) {
        hidden = layer_apply(layer, hidden);
        for (double& h : hidden) {
            h = std::tanh(h);
        }
        if (model.repr_mode == ReprMode::concat) {
            repr.insert(repr.end(), hidden.begin(), hidden.end());
        }
    }
    if (model.repr_mode == ReprMode::last) {
        return hidden;
    }
    return repr;
}

Matrix transform_batch(const WesmaModel& model, const Matrix& x) {
    const std::size_t d = model.feature_count();
    if (x.rows != d) {
        throw std::invalid_argument("dimension mismatch");
    }
    const std::size_t out_rows =
        model.repr_mode == ReprMode::concat ? d * (model.layers.size() + 1) : d;
    Matrix out(out_rows, x.cols);
    std::vector<double> column(d);
    for (std::size_t j = 0; j < x.cols; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            column[i] = x.at(i, j);
        }
        const std::vector<double> repr = transform(model, column);
        for (std::size_t i = 0; i < repr.size(); ++i) {
            out.at(i, j) = repr[i];
        }
    }
    return out;
}

double reconstruction_error(const WesmaModel& model, std::span<const double> x) {
    if (model.layers.empty()) {
        throw std::invalid_argument("model has no layers");
    }
    const std::vector<double> recon = layer_apply(model.layers.front(), x);
    double sum = 0.0;
    for (std::size_t i = 0; i < recon.size(); ++i) {
        const double diff = recon[i] - x[i];
        sum += diff * diff;
    }
    return sum / static_cast<double>(recon.size());
}

Matrix signal_projections(std::size_t dim, std::size_t count, std::uint64_t seed) {
    if (dim == 0 || count == 0) {
        throw std::invalid_argument("projections need positive dimensions");
    }
    Rng rng(derive_seed(seed, tag_hash("token-signal-projections")));
    Matrix proj(count, dim);
    for (std::size_t r = 0; r < count; ++r) {
        double norm_sq = 0.0;
        do {
            norm_sq = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double g = rng.normal();
                proj.at(r, k) = g;
                norm_sq += g * g;
            }
        } while (norm_sq == 0.0);
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (std::size_t k = 0; k < dim; ++k) {
            proj.at(r, k) *= inv;
        }
    }
    return proj;
}

std::vector<Signal> token_signal(std::span<const int> tokens, const EmbeddingMatrix& embeddings,
                                 const Matrix& projections, std::size_t target_length) {
    if (tokens.empty()) {
        throw std::invalid_argument("no signal");
    }
    if (target_length < 4 || (target_length & (target_length - 1)) != 0) {
        throw std::invalid_argument("target length must be a power of two >= 4");
    }
    if (projections.cols != embeddings.dim) {
        throw std::invalid_argument("projection dimension mismatch");
    }
    std::vector<Signal> signals(projections.rows, Signal(target_length));
    for (std::size_t r = 0; r < projections.rows; ++r) {
        const double* direction = projections.row(r);
        for (std::size_t t = 0; t < target_length; ++t) {
            const int token = tokens[t % tokens.size()];
            if (token < 0 || static_cast<std::size_t>(token) >= embeddings.vocab_size) {
                throw std::invalid_argument("token index out of range");
            }
            const auto vec = embeddings.input_vector(static_cast<std::size_t>(token));
            double sum = 0.0;
            for (std::size_t k = 0; k < embeddings.dim; ++k) {
                sum += vec[k] * direction[k];
            }
            signals[r][t] = sum;
        }
    }
    return signals;
}

std::vector<Signal> token_signal(std::span<const int> tokens, const EmbeddingMatrix& embeddings,
                                 std::size_t projections, std::size_t target_length,
                                 std::uint64_t seed) {
    return token_signal(tokens, embeddings,
                        signal_projections(embeddings.dim, projections, seed), target_length);
}

std::vector<double> subband_energy_features(const UwtDecomposition& dec) {
    std::vector<double> features;
    features.reserve(dec.details.size() + 1);
    auto energy = [](const Signal& band) {
        double sum = 0.0;
        for (double v : band) {
            sum += v * v;
        }
        return std::log1p(sum / static_cast<double>(band.size()));
    };
    for (const Signal& band : dec.details) {
        features.push_back(energy(band));
    }
    features.push_back(energy(dec.approx));
    return features;
}

FeatureScaler fit_scaler(const Matrix& feature_rows) {
    FeatureScaler scaler;
    if (feature_rows.rows == 0) {
        return scaler;
    }
    const double n = static_cast<double>(feature_rows.rows);
    for (std::size_t j = 0; j < feature_rows.cols; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < feature_rows.rows; ++i) {
            mean += feature_rows.at(i, j);
        }
        mean /= n;
        double var = 0.0;
        for (std::size_t i = 0; i < feature_rows.rows; ++i) {
            const double diff = feature_rows.at(i, j) - mean;
            var += diff * diff;
        }
        const double stdev = std::sqrt(var / n);
        if (stdev > 0.0) {
            scaler.kept.push_back(j);
            scaler.mean.push_back(mean);
            scaler.stdev.push_back(stdev);
        }
    }
    return scaler;
}

std::vector<double> scale_features(const FeatureScaler& scaler,
                                   std::span<const double> features) {
    std::vector<double> out;
    out.reserve(scaler.kept.size());
    for (std::size_t k = 0; k < scaler.kept.size(); ++k) {
        const std::size_t j = scaler.kept[k];
        if (j >= features.size()) {
            throw std::invalid_argument("feature vector too short for scaler");
        }
        out.push_back((features[j] - scaler.mean[k]) / scaler.stdev[k]);
    }
    return out;
}

std::vector<double> fuse(std::span<const double> representation,
                         std::span<const double> subband_features,
                         const FeatureScaler& scaler) {
    std::vector<double> fused(representation.begin(), representation.end());
    const std::vector<double> scaled = scale_features(scaler, subband_features);
    fused.insert(fused.end(), scaled.begin(), scaled.end());
    return fused;
}

} // namespace wesma
