#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "wesma/rng.hpp"
#include "wesma/textprep.hpp"
#include "wesma/unicode.hpp"

using namespace wesma;

namespace {

LanguageProfile en_profile() {
    LanguageProfile profile;
    profile.lang = "en";
    profile.stopwords = {"the", "a"};
    profile.suffix_rules = {{"ing", 3}, {"s", 3}};
    return profile;
}

// Strings mixing the scripts, markup and controls the normalizer handles.
std::string random_text(Rng& rng) {
    static const std::vector<std::string> pieces = {
        "Hello", "WORLD", "<b>", "</b>", "<", ">", "  ", "\t", "\n", "café",
        "café", "नमस्ते", "தமி",
        "ÉTÉ", "x1", "42", "!", ",", "\x01", "zzz", " ", "élève"};
    std::string out;
    const std::size_t n = 1 + rng.below(12);
    for (std::size_t i = 0; i < n; ++i) {
        out += pieces[rng.below(pieces.size())];
    }
    return out;
}

} // namespace

TEST_SUITE("textprep") {

TEST_CASE("normalize folds case and collapses whitespace") {
    CHECK(normalize("Hello,   WORLD!") == "hello, world!");
}

TEST_CASE("normalize strips markup") {
    CHECK(normalize("<b>Hi</b> there") == "hi there");
    CHECK(normalize("a<br>b") == "a b");
    CHECK(normalize("unmatched < stays") == "unmatched < stays");
}

TEST_CASE("normalize composes accent sequences") {
    // e + combining acute becomes the precomposed letter.
    CHECK(normalize("café") == "café");
    CHECK(normalize("CAFÉ") == "café");
}

TEST_CASE("normalize drops control characters") {
    CHECK(normalize("a\x01"
                    "b") == "ab");
    CHECK(normalize("a \x02 b") == "a b");
}

TEST_CASE("normalize is idempotent on 1000 random strings") {
    Rng rng(2024);
    for (int i = 0; i < 1000; ++i) {
        const std::string s = random_text(rng);
        const std::string once = normalize(s);
        CHECK(normalize(once) == once);
    }
}

TEST_CASE("tokenize splits on word boundaries") {
    CHECK(tokenize("hello, world!") == std::vector<std::string>{"hello", "world"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("x1 42") == std::vector<std::string>{"x1", "42"});
    // Punctuation-only input yields nothing.
    CHECK(tokenize("... !!").empty());
}

TEST_CASE("tokenize keeps devanagari words whole") {
    const auto tokens = tokenize("नमस्ते "
                                 "दुनिया");
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0] == "नमस्ते");
}

TEST_CASE("stopword removal preserves order") {
    const LanguageProfile profile = en_profile();
    CHECK(remove_stopwords({"the", "cat", "a", "hat"}, profile) ==
          std::vector<std::string>{"cat", "hat"});
    LanguageProfile empty;
    CHECK(remove_stopwords({"the", "cat"}, empty) ==
          std::vector<std::string>{"the", "cat"});
    CHECK(remove_stopwords({"the", "a", "the"}, profile).empty());
}

TEST_CASE("stemming strips the longest admissible suffix, once") {
    LanguageProfile profile;
    profile.suffix_rules = {{"ing", 3}};
    CHECK(stem("running", profile) == "runn");
    CHECK(stem("king", profile) == "king"); // stem would be one character

    profile.suffix_rules = {{"ation", 3}, {"s", 3}};
    CHECK(stem("stations", profile) == "station");
    CHECK(stem("nation", profile) == "nation");

    // Oracle: brute force over the rule list.
    LanguageProfile rules;
    rules.suffix_rules = {{"es", 2}, {"ness", 3}, {"s", 2}, {"ly", 3}};
    for (const std::string& word :
         {"darkness", "quickly", "boxes", "cats", "go", "ness", "s"}) {
        std::string expected = word;
        std::size_t best = 0;
        for (const SuffixRule& r : rules.suffix_rules) {
            if (word.size() >= r.suffix.size() &&
                word.compare(word.size() - r.suffix.size(), r.suffix.size(), r.suffix) == 0 &&
                word.size() - r.suffix.size() >= r.min_stem_len && r.suffix.size() > best) {
                best = r.suffix.size();
                expected = word.substr(0, word.size() - r.suffix.size());
            }
        }
        CHECK(stem(word, rules) == expected);
    }
}

TEST_CASE("vocabulary orders by total frequency then lexicographically") {
    const std::vector<std::vector<std::string>> corpus{{"a", "b"}, {"a"}};
    const Vocabulary vocab = build_vocabulary(corpus, 1);
    CHECK(vocab.size() == 2);
    CHECK(vocab.index_of("a") == 0);
    CHECK(vocab.index_of("b") == 1);
    CHECK(vocab.doc_freq[0] == 2);

    const Vocabulary strict = build_vocabulary(corpus, 2);
    CHECK(strict.size() == 1);
    CHECK(strict.index_of("a") == 0);

    CHECK_THROWS_WITH_AS(build_vocabulary(corpus, 3), "vocabulary empty",
                         std::invalid_argument);

    // Ties: equal totals sort lexicographically.
    const Vocabulary tied = build_vocabulary({{"zeta", "alpha"}}, 1);
    CHECK(tied.index_of("alpha") == 0);
    CHECK(tied.index_of("zeta") == 1);
}

TEST_CASE("vocabulary construction is deterministic") {
    Rng rng(5);
    std::vector<std::vector<std::string>> corpus;
    for (int d = 0; d < 100; ++d) {
        std::vector<std::string> doc;
        const std::size_t len = 1 + rng.below(20);
        for (std::size_t t = 0; t < len; ++t) {
            doc.push_back("w" + std::to_string(rng.below(50)));
        }
        corpus.push_back(std::move(doc));
    }
    const Vocabulary first = build_vocabulary(corpus, 1);
    const Vocabulary second = build_vocabulary(corpus, 1);
    CHECK(first.tokens == second.tokens);
    CHECK(first.doc_freq == second.doc_freq);
}

TEST_CASE("count vectors hold raw term counts") {
    const Vocabulary vocab = build_vocabulary({{"a", "b"}}, 1);
    const DocVector v = vectorize({"a", "a", "b", "oov"}, vocab, Weighting::count);
    CHECK(v.dimension == 2);
    CHECK(v.entries.at(vocab.index_of("a")) == 2.0);
    CHECK(v.entries.at(vocab.index_of("b")) == 1.0);

    const DocVector empty = vectorize({}, vocab, Weighting::count);
    CHECK(empty.entries.empty());
}

TEST_CASE("tfidf on a single-document corpus reduces to normalized counts") {
    const Vocabulary vocab = build_vocabulary({{"a", "a", "b"}}, 1);
    // df = 1 and N = 1 make idf = ln(1) + 1 = 1.
    const DocVector v = vectorize({"a", "a", "b"}, vocab, Weighting::tfidf, 1);
    const double norm = std::sqrt(4.0 + 1.0);
    CHECK(v.entries.at(vocab.index_of("a")) == doctest::Approx(2.0 / norm).epsilon(1e-12));
    CHECK(v.entries.at(vocab.index_of("b")) == doctest::Approx(1.0 / norm).epsilon(1e-12));
}

TEST_CASE("nonempty tfidf vectors have unit norm") {
    Rng rng(77);
    std::vector<std::vector<std::string>> corpus;
    for (int d = 0; d < 30; ++d) {
        std::vector<std::string> doc;
        for (std::size_t t = 0; t < 12; ++t) {
            doc.push_back("tok" + std::to_string(rng.below(12)));
        }
        corpus.push_back(std::move(doc));
    }
    const Vocabulary vocab = build_vocabulary(corpus, 1);
    for (const auto& doc : corpus) {
        const DocVector v = vectorize(doc, vocab, Weighting::tfidf, corpus.size());
        double norm_sq = 0.0;
        for (const auto& [idx, w] : v.entries) {
            norm_sq += w * w;
        }
        CHECK(std::sqrt(norm_sq) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(to_dense(v).size() == vocab.size());
    }
    // All-out-of-vocabulary document: zero vector, norm rule waived.
    const DocVector zero = vectorize({"unseen"}, vocab, Weighting::tfidf, corpus.size());
    CHECK(zero.entries.empty());
}

TEST_CASE("preprocess runs the full pinned order") {
    const LanguageProfile profile = en_profile();
    const auto tokens = preprocess("The CAT is Running!   ", profile);
    CHECK(tokens == std::vector<std::string>{"cat", "is", "runn"});
}

} // TEST_SUITE
