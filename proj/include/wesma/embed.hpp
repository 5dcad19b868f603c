#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wesma/textprep.hpp"

namespace wesma {

struct EmbeddingMatrix {
    std::size_t vocab_size = 0;
    std::size_t dim = 0;
    std::vector<double> input_vectors;  // row-major V x d
    std::vector<double> output_vectors; // row-major V x d

    std::span<const double> input_vector(std::size_t i) const {
        return {input_vectors.data() + i * dim, dim};
    }
    std::span<const double> output_vector(std::size_t i) const {
        return {output_vectors.data() + i * dim, dim};
    }
};

struct CbowConfig {
    std::size_t dim = 32;
    std::size_t window = 4;
    std::size_t negatives = 5;
    double learning_rate = 0.05;
    std::size_t epochs = 5;
    std::uint64_t seed = 1;
};

// Loss and gradients of one negative-sampling step. grad_context_mean is the
// gradient with respect to the averaged context vector; each context word's
// input vector receives grad_context_mean / context_size.
struct CbowStep {
    double loss = 0.0;
    std::vector<double> grad_context_mean;
    std::vector<double> grad_center_output;
    std::vector<std::vector<double>> grad_negative_outputs;
};

double cbow_loss(const EmbeddingMatrix& e, std::span<const int> context, int center,
                 std::span<const int> negatives);

CbowStep cbow_gradients(const EmbeddingMatrix& e, std::span<const int> context, int center,
                        std::span<const int> negatives);

struct CbowTrainResult {
    EmbeddingMatrix embeddings;
    std::vector<double> epoch_mean_loss;
};

// Corpus documents are streams of vocabulary indices. Negatives come from the
// unigram^0.75 distribution; updates are plain SGD in corpus order, so results
// are a pure function of (corpus, vocab, cfg).
CbowTrainResult train_cbow(const std::vector<std::vector<int>>& corpus,
                           const Vocabulary& vocab, const CbowConfig& cfg);

// Throws "undefined similarity" on zero vectors.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

// Top-k neighbours of word i by cosine over input vectors, i excluded;
// descending similarity, ties to the lower index.
std::vector<std::pair<int, double>> nearest_neighbors(const EmbeddingMatrix& e, int word,
                                                      std::size_t k);

} // namespace wesma
