#include "wesma/embed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wesma/rng.hpp"

namespace wesma {

namespace {

double sigmoid(double z) {
    return 1.0 / (1.0 + std::exp(-z));
}

// -ln sigmoid(z), stable for large |z|.
double softplus_neg(double z) {
    if (z > 0.0) {
        return std::log1p(std::exp(-z));
    }
    return -z + std::log1p(std::exp(z));
}

std::vector<double> context_mean(const EmbeddingMatrix& e, std::span<const int> context) {
    if (context.empty()) {
        throw std::invalid_argument("empty context");
    }
    std::vector<double> mean(e.dim, 0.0);
    for (int w : context) {
        const auto v = e.input_vector(static_cast<std::size_t>(w));
        for (std::size_t t = 0; t < e.dim; ++t) {
            mean[t] += v[t];
        }
    }
    const double inv = 1.0 / static_cast<double>(context.size());
    for (double& m : mean) {
        m *= inv;
    }
    return mean;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += a[i] * b[i];
    }
    return sum;
}

} // namespace

double cbow_loss(const EmbeddingMatrix& e, std::span<const int> context, int center,
                 std::span<const int> negatives) {
    const std::vector<double> mean = context_mean(e, context);
    double loss = softplus_neg(dot(mean, e.output_vector(static_cast<std::size_t>(center))));
    for (int neg : negatives) {
        loss += softplus_neg(-dot(mean, e.output_vector(static_cast<std::size_t>(neg))));
    }
    return loss;
}

CbowStep cbow_gradients(const EmbeddingMatrix& e, std::span<const int> context, int center,
                        std::span<const int> negatives) {
    const std::vector<double> mean = context_mean(e, context);
    CbowStep step;
    step.grad_context_mean.assign(e.dim, 0.0);
    step.grad_center_output.assign(e.dim, 0.0);

    const auto center_out = e.output_vector(static_cast<std::size_t>(center));
    const double z_pos = dot(mean, center_out);
    step.loss = softplus_neg(z_pos);
    const double g_pos = sigmoid(z_pos) - 1.0;
    for (std::size_t t = 0; t < e.dim; ++t) {
        step.grad_center_output[t] = g_pos * mean[t];
        step.grad_context_mean[t] = g_pos * center_out[t];
    }

    step.grad_negative_outputs.reserve(negatives.size());
    for (int neg : negatives) {
        const auto neg_out = e.output_vector(static_cast<std::size_t>(neg));
        const double z_neg = dot(mean, neg_out);
        step.loss += softplus_neg(-z_neg);
        const double g_neg = sigmoid(z_neg);
        std::vector<double> grad(e.dim);
        for (std::size_t t = 0; t < e.dim; ++t) {
            grad[t] = g_neg * mean[t];
            step.grad_context_mean[t] += g_neg * neg_out[t];
        }
        step.grad_negative_outputs.push_back(std::move(grad));
    }
    return step;
}

CbowTrainResult train_cbow(const std::vector<std::vector<int>>& corpus,
                           const Vocabulary& vocab, const CbowConfig& cfg) {
    if (cfg.dim < 2) {
        throw std::invalid_argument("embedding dimension must be at least 2");
    }
    const std::size_t v = vocab.size();
    if (v == 0) {
        throw std::invalid_argument("empty vocabulary");
    }
    for (const auto& doc : corpus) {
        for (int w : doc) {
            if (w < 0 || static_cast<std::size_t>(w) >= v) {
                throw std::invalid_argument("token index out of range");
            }
        }
    }

    Rng rng(cfg.seed);
    CbowTrainResult result;
    EmbeddingMatrix& e = result.embeddings;
    e.vocab_size = v;
    e.dim = cfg.dim;
    const double init = 0.5 / static_cast<double>(cfg.dim);
    e.input_vectors.resize(v * cfg.dim);
    e.output_vectors.resize(v * cfg.dim);
    for (double& x : e.input_vectors) {
        x = rng.uniform(-init, init);
    }
    for (double& x : e.output_vectors) {
        x = rng.uniform(-init, init);
    }

    // unigram^0.75 sampling table over corpus counts.
    std::vector<double> cdf(v, 0.0);
    {
        std::vector<double> counts(v, 0.0);
        for (const auto& doc : corpus) {
            for (int w : doc) {
                counts[static_cast<std::size_t>(w)] += 1.0;
            }
        }
        double running = 0.0;
        for (std::size_t i = 0; i < v; ++i) {
            running += std::pow(counts[i], 0.75);
            cdf[i] = running;
        }
        if (running <= 0.0) {
            throw std::invalid_argument("no training pairs");
        }
    }

    bool any_pair = false;
    std::vector<int> context;
    std::vector<int> negatives;
    std::vector<double> mean_grad_applied(cfg.dim);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss_sum = 0.0;
        std::size_t pair_count = 0;
        for (const auto& doc : corpus) {
            const std::size_t len = doc.size();
            for (std::size_t t = 0; t < len; ++t) {
                context.clear();
                const std::size_t lo = (t > cfg.window) ? t - cfg.window : 0;
                const std::size_t hi = std::min(len, t + cfg.window + 1);
                for (std::size_t p = lo; p < hi; ++p) {
                    if (p != t) {
                        context.push_back(doc[p]);
                    }
                }
                if (context.empty()) {
                    continue;
                }
                const int center = doc[t];
                negatives.clear();
                for (std::size_t s = 0; s < cfg.negatives; ++s) {
                    const int cand = static_cast<int>(rng.pick_cdf(cdf));
                    if (cand != center) {
                        negatives.push_back(cand);
                    }
                }

                const CbowStep step = cbow_gradients(e, context, center, negatives);
                loss_sum += step.loss;
                ++pair_count;
                any_pair = true;

                double* center_out =
                    e.output_vectors.data() + static_cast<std::size_t>(center) * cfg.dim;
                for (std::size_t k = 0; k < cfg.dim; ++k) {
                    center_out[k] -= cfg.learning_rate * step.grad_center_output[k];
                }
                for (std::size_t j = 0; j < negatives.size(); ++j) {
                    double* neg_out = e.output_vectors.data() +
                                      static_cast<std::size_t>(negatives[j]) * cfg.dim;
                    for (std::size_t k = 0; k < cfg.dim; ++k) {
                        neg_out[k] -= cfg.learning_rate * step.grad_negative_outputs[j][k];
                    }
                }
                const double scale = cfg.learning_rate / static_cast<double>(context.size());
                for (std::size_t k = 0; k < cfg.dim; ++k) {
                    mean_grad_applied[k] = scale * step.grad_context_mean[k];
                }
                for (int w : context) {
                    double* in = e.input_vectors.data() + static_cast<std::size_t>(w) * cfg.dim;
                    for (std::size_t k = 0; k < cfg.dim; ++k) {
                        in[k] -= mean_grad_applied[k];
                    }
                }
            }
        }
        if (pair_count > 0) {
            result.epoch_mean_loss.push_back(loss_sum / static_cast<double>(pair_count));
        }
    }
    if (!any_pair) {
        throw std::invalid_argument("no training pairs");
    }
    return result;
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw std::invalid_argument("dimension mismatch");
    }
    double uu = 0.0;
    double vv = 0.0;
    double uv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        uu += u[i] * u[i];
        vv += v[i] * v[i];
        uv += u[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) {
        throw std::invalid_argument("undefined similarity");
    }
    return uv / std::sqrt(uu * vv);
}

std::vector<std::pair<int, double>> nearest_neighbors(const EmbeddingMatrix& e, int word,
                                                      std::size_t k) {
    if (word < 0 || static_cast<std::size_t>(word) >= e.vocab_size) {
        throw std::invalid_argument("word index out of range");
    }
    if (k >= e.vocab_size) {
        throw std::invalid_argument("k must be smaller than the vocabulary");
    }
    std::vector<std::pair<int, double>> sims;
    sims.reserve(e.vocab_size - 1);
    const auto query = e.input_vector(static_cast<std::size_t>(word));
    for (std::size_t i = 0; i < e.vocab_size; ++i) {
        if (static_cast<int>(i) == word) {
            continue;
        }
        sims.emplace_back(static_cast<int>(i), cosine_similarity(query, e.input_vector(i)));
    }
    std::stable_sort(sims.begin(), sims.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });
    sims.resize(k);
    return sims;
}

} // namespace wesma
