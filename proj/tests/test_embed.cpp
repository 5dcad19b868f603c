#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "wesma/embed.hpp"
#include "wesma/rng.hpp"

using namespace wesma;

namespace {

Vocabulary fake_vocab(std::size_t v) {
    Vocabulary vocab;
    for (std::size_t i = 0; i < v; ++i) {
        vocab.tokens.push_back("w" + std::to_string(i));
        vocab.token_to_index[vocab.tokens.back()] = static_cast<int>(i);
        vocab.doc_freq.push_back(1);
    }
    return vocab;
}

EmbeddingMatrix random_embeddings(std::size_t v, std::size_t d, std::uint64_t seed) {
    EmbeddingMatrix e;
    e.vocab_size = v;
    e.dim = d;
    e.input_vectors.resize(v * d);
    e.output_vectors.resize(v * d);
    Rng rng(seed);
    for (double& x : e.input_vectors) {
        x = rng.uniform(-0.8, 0.8);
    }
    for (double& x : e.output_vectors) {
        x = rng.uniform(-0.8, 0.8);
    }
    return e;
}

// Central finite differences of the loss against every analytic gradient
// coordinate touched by one step.
double max_gradient_relative_error(EmbeddingMatrix e, const std::vector<int>& context,
                                   int center, const std::vector<int>& negatives) {
    const double eps = 1e-5;
    const CbowStep step = cbow_gradients(e, context, center, negatives);

    // Context words may repeat; accumulate the analytic gradient per index.
    std::map<int, double> context_multiplicity;
    for (int w : context) {
        context_multiplicity[w] += 1.0;
    }

    double worst = 0.0;
    auto probe = [&](std::vector<double>& param, std::size_t offset, double analytic) {
        const double saved = param[offset];
        param[offset] = saved + eps;
        const double up = cbow_loss(e, context, center, negatives);
        param[offset] = saved - eps;
        const double down = cbow_loss(e, context, center, negatives);
        param[offset] = saved;
        const double numeric = (up - down) / (2.0 * eps);
        const double scale = std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
        worst = std::max(worst, std::fabs(analytic - numeric) / scale);
    };

    for (const auto& [word, multiplicity] : context_multiplicity) {
        for (std::size_t k = 0; k < e.dim; ++k) {
            const double analytic = step.grad_context_mean[k] * multiplicity /
                                    static_cast<double>(context.size());
            probe(e.input_vectors, static_cast<std::size_t>(word) * e.dim + k, analytic);
        }
    }
    for (std::size_t k = 0; k < e.dim; ++k) {
        probe(e.output_vectors, static_cast<std::size_t>(center) * e.dim + k,
              step.grad_center_output[k]);
    }
    std::map<int, std::vector<double>> negative_grads;
    for (std::size_t j = 0; j < negatives.size(); ++j) {
        auto& acc = negative_grads[negatives[j]];
        if (acc.empty()) {
            acc.assign(e.dim, 0.0);
        }
        for (std::size_t k = 0; k < e.dim; ++k) {
            acc[k] += step.grad_negative_outputs[j][k];
        }
    }
    for (const auto& [neg, grad] : negative_grads) {
        for (std::size_t k = 0; k < e.dim; ++k) {
            probe(e.output_vectors, static_cast<std::size_t>(neg) * e.dim + k, grad[k]);
        }
    }
    return worst;
}

} // namespace

TEST_SUITE("embed") {

TEST_CASE("cosine similarity") {
    const std::vector<double> u{1.0, 0.0};
    CHECK(cosine_similarity(u, u) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine_similarity(u, std::vector<double>{0.0, 2.0}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(cosine_similarity(u, std::vector<double>{1.0, 1.0}) ==
          doctest::Approx(0.7071).epsilon(1e-4));
    CHECK_THROWS_WITH_AS(cosine_similarity(u, std::vector<double>{0.0, 0.0}),
                         "undefined similarity", std::invalid_argument);
}

TEST_CASE("cosine stays within [-1, 1] for random inputs") {
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> u(5);
        std::vector<double> v(5);
        for (std::size_t k = 0; k < 5; ++k) {
            u[k] = rng.uniform(-10.0, 10.0);
            v[k] = rng.uniform(-10.0, 10.0);
        }
        CHECK(std::fabs(cosine_similarity(u, v)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("nearest neighbors against a brute-force sort") {
    const EmbeddingMatrix e = random_embeddings(5, 4, 31);
    for (int word = 0; word < 5; ++word) {
        std::vector<std::pair<int, double>> expected;
        for (int other = 0; other < 5; ++other) {
            if (other != word) {
                expected.emplace_back(
                    other, cosine_similarity(e.input_vector(word), e.input_vector(other)));
            }
        }
        std::stable_sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) {
                return a.second > b.second;
            }
            return a.first < b.first;
        });
        const auto got = nearest_neighbors(e, word, 4);
        REQUIRE(got.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(got[i].first == expected[i].first);
            CHECK(got[i].second == expected[i].second);
        }
    }
    // Two-word vocabulary: the only candidate comes back whatever its score.
    const EmbeddingMatrix tiny = random_embeddings(2, 3, 9);
    const auto pair = nearest_neighbors(tiny, 0, 1);
    REQUIRE(pair.size() == 1);
    CHECK(pair[0].first == 1);
    CHECK(nearest_neighbors(tiny, 0, 0).empty());
    CHECK_THROWS_AS(nearest_neighbors(tiny, 0, 2), std::invalid_argument);
}

TEST_CASE("analytic gradients match central finite differences") {
    const EmbeddingMatrix e = random_embeddings(12, 6, 404);
    CHECK(max_gradient_relative_error(e, {1, 4, 7}, 2, {5, 9}) < 1e-4);
    // Repeated context words accumulate gradient mass.
    CHECK(max_gradient_relative_error(e, {3, 3, 8}, 0, {6}) < 1e-4);
}

TEST_CASE("gradient check holds at many random parameter points") {
    Rng rng(15);
    for (int trial = 0; trial < 10; ++trial) {
        const EmbeddingMatrix e = random_embeddings(10, 5, 600 + trial);
        std::vector<int> context;
        const std::size_t ctx_size = 1 + rng.below(4);
        for (std::size_t i = 0; i < ctx_size; ++i) {
            context.push_back(static_cast<int>(rng.below(10)));
        }
        const int center = static_cast<int>(rng.below(10));
        std::vector<int> negatives;
        for (std::size_t i = 0; i < 3; ++i) {
            const int cand = static_cast<int>(rng.below(10));
            if (cand != center) {
                negatives.push_back(cand);
            }
        }
        CHECK(max_gradient_relative_error(e, context, center, negatives) < 1e-4);
    }
}

TEST_CASE("interchangeable words end up close") {
    // w0 and w1 always appear in identical contexts; w6..w9 never share them.
    std::vector<std::vector<int>> corpus;
    for (int rep = 0; rep < 60; ++rep) {
        corpus.push_back({2, 0, 3});
        corpus.push_back({2, 1, 3});
        corpus.push_back({4, 0, 5});
        corpus.push_back({4, 1, 5});
        corpus.push_back({6, 7, 8, 9});
    }
    CbowConfig cfg;
    cfg.dim = 16;
    cfg.window = 2;
    cfg.negatives = 4;
    cfg.epochs = 12;
    cfg.learning_rate = 0.1;
    cfg.seed = 2;
    const CbowTrainResult result = train_cbow(corpus, fake_vocab(10), cfg);
    const auto& e = result.embeddings;
    const double twin = cosine_similarity(e.input_vector(0), e.input_vector(1));
    for (int unrelated : {6, 7, 8, 9}) {
        CHECK(twin > cosine_similarity(e.input_vector(0), e.input_vector(unrelated)));
    }
}

TEST_CASE("training loss decreases") {
    std::vector<std::vector<int>> corpus;
    Rng rng(55);
    for (int d = 0; d < 40; ++d) {
        std::vector<int> doc;
        for (int t = 0; t < 12; ++t) {
            doc.push_back(static_cast<int>(rng.below(8)));
        }
        corpus.push_back(std::move(doc));
    }
    CbowConfig cfg;
    cfg.dim = 8;
    cfg.epochs = 6;
    cfg.seed = 3;
    const CbowTrainResult result = train_cbow(corpus, fake_vocab(8), cfg);
    REQUIRE(result.epoch_mean_loss.size() == 6);
    CHECK(result.epoch_mean_loss.back() < result.epoch_mean_loss.front());
}

TEST_CASE("training is deterministic given the seed") {
    std::vector<std::vector<int>> corpus{{0, 1, 2, 3, 4}, {4, 3, 2, 1, 0}, {1, 3, 0, 2}};
    CbowConfig cfg;
    cfg.dim = 6;
    cfg.epochs = 3;
    cfg.seed = 77;
    const CbowTrainResult a = train_cbow(corpus, fake_vocab(5), cfg);
    const CbowTrainResult b = train_cbow(corpus, fake_vocab(5), cfg);
    CHECK(a.embeddings.input_vectors == b.embeddings.input_vectors);
    CHECK(a.embeddings.output_vectors == b.embeddings.output_vectors);
    CHECK(a.epoch_mean_loss == b.epoch_mean_loss);
}

TEST_CASE("a single-token corpus has no training pairs") {
    const std::vector<std::vector<int>> corpus{{0}};
    CbowConfig cfg;
    cfg.seed = 1;
    CHECK_THROWS_WITH_AS(train_cbow(corpus, fake_vocab(1), cfg), "no training pairs",
                         std::invalid_argument);
}

} // TEST_SUITE
