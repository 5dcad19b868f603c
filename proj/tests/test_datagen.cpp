#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "wesma/datagen.hpp"
#include "wesma/denoise.hpp"
#include "wesma/textprep.hpp"
#include "wesma/unicode.hpp"

using namespace wesma;

namespace {

CorpusSpec small_spec() {
    CorpusSpec spec;
    spec.languages = {{"en", 40, 30}, {"hi", 40, 30}};
    spec.doc_length_mean = 12;
    spec.typo_rate = 0.0;
    spec.threat_rate = 0.2;
    spec.seed = 11;
    return spec;
}

} // namespace

TEST_SUITE("datagen") {

TEST_CASE("generated signals are peak-normalized and deterministic") {
    for (SignalKind kind :
         {SignalKind::blocks, SignalKind::bumps, SignalKind::doppler, SignalKind::sine}) {
        const Signal x = gen_signal(kind, 512, 3);
        REQUIRE(x.size() == 512);
        double peak = 0.0;
        for (double v : x) {
            REQUIRE(std::isfinite(v));
            peak = std::max(peak, std::fabs(v));
        }
        CHECK(peak == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(gen_signal(kind, 512, 3) == x);
    }
    CHECK_THROWS_AS(gen_signal(SignalKind::sine, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(signal_kind_from_string("sawtooth"), std::invalid_argument);
}

TEST_CASE("blocks is piecewise constant away from its jumps") {
    const Signal x = gen_signal(SignalKind::blocks, 1024, 0);
    const UwtDecomposition dec = uwt_forward(x, wavelet_filter("haar"), 1);
    std::size_t nonzero = 0;
    for (double v : dec.details[0]) {
        if (std::fabs(v) > 1e-12) {
            ++nonzero;
        }
    }
    // Eleven jumps, each inside filter reach of one detail coefficient.
    CHECK(nonzero <= 12);
}

TEST_CASE("awgn sigma follows the target snr analytically") {
    // Unit-power signal at 20 dB: sigma = 0.1.
    const Signal alternating{1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0};
    NoiseSpec spec;
    spec.target_snr_db = 20.0;
    spec.seed = 5;
    const auto [noisy, sigma] = add_awgn(alternating, spec);
    CHECK(sigma == doctest::Approx(0.1).epsilon(1e-12));

    spec.target_snr_db = 10.5;
    const auto [noisy2, sigma2] = add_awgn(alternating, spec);
    CHECK(sigma2 == doctest::Approx(0.2985).epsilon(1e-4));

    // Clean spec: identity, sigma 0.
    NoiseSpec clean;
    clean.seed = 5;
    const auto [same, zero_sigma] = add_awgn(alternating, clean);
    CHECK(same == alternating);
    CHECK(zero_sigma == 0.0);

    CHECK_THROWS_WITH_AS(add_awgn(Signal(8, 0.0), spec), "all-zero input",
                         std::invalid_argument);
}

TEST_CASE("realized snr concentrates on the target") {
    const Signal x = gen_signal(SignalKind::doppler, 2048, 0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        NoiseSpec spec;
        spec.target_snr_db = 10.5;
        spec.seed = seed;
        const auto [noisy, sigma] = add_awgn(x, spec);
        CHECK(std::fabs(snr_db(x, noisy) - 10.5) <= 1.0);
    }
}

TEST_CASE("corpus generation is deterministic and honors rates") {
    const std::vector<RawDocument> docs = gen_corpus(small_spec());
    REQUIRE(docs.size() == 60);
    const std::vector<RawDocument> again = gen_corpus(small_spec());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        CHECK(docs[i].id == again[i].id);
        CHECK(docs[i].text == again[i].text);
        CHECK(docs[i].label == again[i].label);
    }

    // threat_rate = 0: everything legit.
    CorpusSpec no_threat = small_spec();
    no_threat.threat_rate = 0.0;
    for (const RawDocument& doc : gen_corpus(no_threat)) {
        CHECK(*doc.label == Label::legit);
    }

    // Label proportions stay within three binomial standard deviations.
    std::size_t threats = 0;
    for (const RawDocument& doc : docs) {
        threats += (*doc.label == Label::threat) ? 1 : 0;
    }
    const double n = static_cast<double>(docs.size());
    const double expectation = 0.2 * n;
    const double stdev = std::sqrt(n * 0.2 * 0.8);
    CHECK(std::fabs(static_cast<double>(threats) - expectation) <= 3.0 * stdev);
}

TEST_CASE("zero typo rate keeps every token in-vocabulary") {
    CorpusSpec spec = small_spec();
    spec.typo_rate = 0.0;
    const std::vector<RawDocument> docs = gen_corpus(spec);

    // Rebuild the per-language token inventory from the corpus itself.
    std::map<std::string, std::set<std::string>> tokens_by_lang;
    for (const RawDocument& doc : docs) {
        for (const std::string& token : tokenize(normalize(doc.text))) {
            tokens_by_lang[doc.lang].insert(token);
        }
    }
    for (const auto& [lang, tokens] : tokens_by_lang) {
        CHECK(tokens.size() <= 40); // never more distinct tokens than the vocabulary
    }

    // With typos, new token shapes appear.
    CorpusSpec noisy = small_spec();
    noisy.typo_rate = 0.5;
    noisy.doc_length_mean = 40;
    std::set<std::string> noisy_tokens;
    for (const RawDocument& doc : gen_corpus(noisy)) {
        for (const std::string& token : tokenize(normalize(doc.text))) {
            noisy_tokens.insert(token);
        }
    }
    CHECK(noisy_tokens.size() > 80);
}

TEST_CASE("language scripts match their blocks") {
    const std::vector<RawDocument> docs = gen_corpus(small_spec());
    for (const RawDocument& doc : docs) {
        const auto cps = utf8_decode(doc.text);
        for (char32_t c : cps) {
            if (c == U' ') {
                continue;
            }
            if (doc.lang == "hi") {
                CHECK((c >= 0x0900 && c <= 0x097F));
            } else {
                CHECK(c < 0x0250);
            }
        }
    }
}

TEST_CASE("threat documents use the shifted vocabulary pool") {
    CorpusSpec spec;
    spec.languages = {{"en", 100, 200}};
    spec.doc_length_mean = 20;
    spec.threat_rate = 0.3;
    spec.seed = 77;
    const std::vector<RawDocument> docs = gen_corpus(spec);

    std::map<std::string, std::size_t> legit_counts;
    std::map<std::string, std::size_t> threat_counts;
    for (const RawDocument& doc : docs) {
        auto& counts = (*doc.label == Label::threat) ? threat_counts : legit_counts;
        for (const std::string& token : tokenize(normalize(doc.text))) {
            ++counts[token];
        }
    }
    REQUIRE(!threat_counts.empty());
    // The threat distribution's most frequent term is rare among legit docs.
    std::string top_threat;
    std::size_t top_count = 0;
    std::size_t threat_total = 0;
    for (const auto& [token, count] : threat_counts) {
        threat_total += count;
        if (count > top_count) {
            top_count = count;
            top_threat = token;
        }
    }
    std::size_t legit_total = 0;
    for (const auto& [token, count] : legit_counts) {
        legit_total += count;
    }
    const double threat_share =
        static_cast<double>(top_count) / static_cast<double>(threat_total);
    const double legit_share = static_cast<double>(legit_counts[top_threat]) /
                               static_cast<double>(legit_total);
    CHECK(threat_share > 10.0 * legit_share);
}

} // TEST_SUITE
