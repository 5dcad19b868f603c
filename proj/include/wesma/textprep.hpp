#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace wesma {

enum class Label { legit, threat };

Label label_from_string(const std::string& s);
std::string to_string(Label label);

struct RawDocument {
    std::string id;
    std::string lang;
    std::string text;
    std::optional<Label> label;
};

struct SuffixRule {
    std::string suffix;
    std::size_t min_stem_len = 1;
};

struct LanguageProfile {
    std::string lang;
    std::set<std::string> stopwords;
    std::vector<SuffixRule> suffix_rules;
};

struct Vocabulary {
    std::vector<std::string> tokens;         // index -> token
    std::map<std::string, int> token_to_index;
    std::vector<int> doc_freq;               // index -> document frequency

    std::size_t size() const { return tokens.size(); }
    int index_of(const std::string& token) const {
        auto it = token_to_index.find(token);
        return it == token_to_index.end() ? -1 : it->second;
    }
};

// Sparse weighted document vector over a vocabulary index space.
struct DocVector {
    std::map<int, double> entries;
    std::size_t dimension = 0;
};

// HTML stripping, canonical composition, case folding, whitespace collapse,
// control removal. Idempotent.
std::string normalize(std::string_view text);

// Maximal runs of letters/digits/combining marks; tokens must contain at
// least one letter or digit. Expects normalized text.
std::vector<std::string> tokenize(std::string_view text);

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const LanguageProfile& profile);

// Strip the longest matching suffix that leaves at least min_stem_len
// characters; at most one rule fires.
std::string stem(const std::string& token, const LanguageProfile& profile);

// normalize -> tokenize -> stopwords -> stem, in that order.
std::vector<std::string> preprocess(std::string_view raw_text, const LanguageProfile& profile);

// Tokens with document frequency >= min_count, indexed by descending total
// frequency, ties lexicographic.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& corpus, int min_count);

enum class Weighting { count, tfidf };

// tfidf: tf * (ln((1+N)/(1+df)) + 1), L2-normalized; corpus_size is N.
// Out-of-vocabulary tokens are dropped.
DocVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                    Weighting weighting, std::size_t corpus_size = 0);

std::vector<double> to_dense(const DocVector& v);

} // namespace wesma
