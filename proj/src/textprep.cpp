#include "wesma/textprep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wesma/unicode.hpp"

namespace wesma {

Label label_from_string(const std::string& s) {
    if (s == "legit") {
        return Label::legit;
    }
    if (s == "threat") {
        return Label::threat;
    }
    throw std::invalid_argument("unknown label: " + s);
}

std::string to_string(Label label) {
    return label == Label::legit ? "legit" : "threat";
}

namespace {

// Remove every '<'...'>' region that actually closes; an unmatched '<'
// stays put. Each stripped region becomes one space.
std::vector<char32_t> strip_markup(const std::vector<char32_t>& cps) {
    std::vector<char32_t> out;
    out.reserve(cps.size());
    std::size_t i = 0;
    while (i < cps.size()) {
        if (cps[i] == U'<') {
            std::size_t close = i + 1;
            while (close < cps.size() && cps[close] != U'>') {
                ++close;
            }
            if (close < cps.size()) {
                out.push_back(U' ');
                i = close + 1;
                continue;
            }
        }
        out.push_back(cps[i]);
        ++i;
    }
    return out;
}

} // namespace

std::string normalize(std::string_view text) {
    std::vector<char32_t> cps = utf8_decode(text);
    cps = strip_markup(cps);
    compose_canonical(cps);

    std::vector<char32_t> cleaned;
    cleaned.reserve(cps.size());
    for (char32_t c : cps) {
        c = fold_case(c);
        if (is_space_char(c)) {
            cleaned.push_back(U' ');
        } else if (!is_control_char(c)) {
            cleaned.push_back(c);
        }
    }

    std::vector<char32_t> collapsed;
    collapsed.reserve(cleaned.size());
    for (char32_t c : cleaned) {
        if (c == U' ' && (collapsed.empty() || collapsed.back() == U' ')) {
            continue;
        }
        collapsed.push_back(c);
    }
    while (!collapsed.empty() && collapsed.back() == U' ') {
        collapsed.pop_back();
    }
    return utf8_encode(collapsed);
}

std::vector<std::string> tokenize(std::string_view text) {
    const std::vector<char32_t> cps = utf8_decode(text);
    std::vector<std::string> tokens;
    std::vector<char32_t> current;
    bool has_word_char = false;

    auto flush = [&]() {
        if (!current.empty() && has_word_char) {
            tokens.push_back(utf8_encode(current));
        }
        current.clear();
        has_word_char = false;
    };

    for (char32_t c : cps) {
        if (is_letter(c) || is_digit_char(c) || is_combining_mark(c)) {
            current.push_back(c);
            if (is_letter(c) || is_digit_char(c)) {
                has_word_char = true;
            }
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const LanguageProfile& profile) {
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (const std::string& token : tokens) {
        if (!profile.stopwords.contains(token)) {
            kept.push_back(token);
        }
    }
    return kept;
}

std::string stem(const std::string& token, const LanguageProfile& profile) {
    if (token.empty()) {
        throw std::invalid_argument("empty token");
    }
    const std::vector<char32_t> cps = utf8_decode(token);
    const SuffixRule* best = nullptr;
    std::size_t best_len = 0;
    for (const SuffixRule& rule : profile.suffix_rules) {
        const std::vector<char32_t> suffix = utf8_decode(rule.suffix);
        if (suffix.empty() || suffix.size() > cps.size()) {
            continue;
        }
        if (!std::equal(suffix.begin(), suffix.end(), cps.end() - suffix.size())) {
            continue;
        }
        if (cps.size() - suffix.size() < rule.min_stem_len) {
            continue;
        }
        if (best == nullptr || suffix.size() > best_len) {
            best = &rule;
            best_len = suffix.size();
        }
    }
    if (best == nullptr) {
        return token;
    }
    std::vector<char32_t> stemmed(cps.begin(), cps.end() - best_len);
    return utf8_encode(stemmed);
}

std::vector<std::string> preprocess(std::string_view raw_text,
                                    const LanguageProfile& profile) {
    std::vector<std::string> tokens = tokenize(normalize(raw_text));
    tokens = remove_stopwords(tokens, profile);
    for (std::string& token : tokens) {
        token = stem(token, profile);
    }
    return tokens;
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& corpus,
                            int min_count) {
    if (min_count < 1) {
        throw std::invalid_argument("min_count must be positive");
    }
    std::map<std::string, long long> total_freq;
    std::map<std::string, int> doc_freq;
    for (const std::vector<std::string>& doc : corpus) {
        std::set<std::string> seen;
        for (const std::string& token : doc) {
            ++total_freq[token];
            seen.insert(token);
        }
        for (const std::string& token : seen) {
            ++doc_freq[token];
        }
    }

    std::vector<std::string> kept;
    for (const auto& [token, df] : doc_freq) {
        if (df >= min_count) {
            kept.push_back(token);
        }
    }
    if (kept.empty()) {
        throw std::invalid_argument("vocabulary empty");
    }
    std::sort(kept.begin(), kept.end(), [&](const std::string& a, const std::string& b) {
        const long long fa = total_freq[a];
        const long long fb = total_freq[b];
        if (fa != fb) {
            return fa > fb;
        }
        return a < b;
    });

    Vocabulary vocab;
    vocab.tokens = std::move(kept);
    vocab.doc_freq.resize(vocab.tokens.size());
    for (std::size_t i = 0; i < vocab.tokens.size(); ++i) {
        vocab.token_to_index[vocab.tokens[i]] = static_cast<int>(i);
        vocab.doc_freq[i] = doc_freq[vocab.tokens[i]];
    }
    return vocab;
}

DocVector vectorize(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                    Weighting weighting, std::size_t corpus_size) {
    if (weighting == Weighting::tfidf && corpus_size == 0) {
        throw std::invalid_argument("tfidf requires the corpus size");
    }
    DocVector v;
    v.dimension = vocab.size();
    for (const std::string& token : tokens) {
        const int idx = vocab.index_of(token);
        if (idx >= 0) {
            v.entries[idx] += 1.0;
        }
    }
    if (weighting == Weighting::tfidf) {
        double norm_sq = 0.0;
        for (auto& [idx, weight] : v.entries) {
            const double df = static_cast<double>(vocab.doc_freq[static_cast<std::size_t>(idx)]);
            const double idf =
                std::log((1.0 + static_cast<double>(corpus_size)) / (1.0 + df)) + 1.0;
            weight *= idf;
            norm_sq += weight * weight;
        }
        if (norm_sq > 0.0) {
            const double inv = 1.0 / std::sqrt(norm_sq);
            for (auto& [idx, weight] : v.entries) {
                weight *= inv;
            }
        }
    }
    return v;
}

std::vector<double> to_dense(const DocVector& v) {
    std::vector<double> dense(v.dimension, 0.0);
    for (const auto& [idx, weight] : v.entries) {
        dense[static_cast<std::size_t>(idx)] = weight;
    }
    return dense;
}

} // namespace wesma
