#include "wesma/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "wesma/rng.hpp"
#include "wesma/unicode.hpp"

namespace wesma {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Classic piecewise-constant jump positions and heights.
constexpr double kJumpPos[] = {0.1, 0.13, 0.15, 0.23, 0.25, 0.4,
                               0.44, 0.65, 0.76, 0.78, 0.81};
constexpr double kBlockHeights[] = {4.0, -5.0, 3.0, -4.0, 5.0, -4.2,
                                    2.1, 4.3, -3.1, 2.1, -4.2};
constexpr double kBumpHeights[] = {4.0, 5.0, 3.0, 4.0, 5.0, 4.2,
                                   2.1, 4.3, 3.1, 5.1, 4.2};
constexpr double kBumpWidths[] = {0.005, 0.005, 0.006, 0.01, 0.01, 0.03,
                                  0.01, 0.01, 0.005, 0.008, 0.005};

void peak_normalize(Signal& x) {
    double peak = 0.0;
    for (double v : x) {
        peak = std::max(peak, std::fabs(v));
    }
    if (peak > 0.0) {
        for (double& v : x) {
            v /= peak;
        }
    }
}

struct Alphabet {
    std::vector<char32_t> letters;
    std::vector<char32_t> marks; // optional vowel signs appended after letters
};

Alphabet alphabet_for(const std::string& lang) {
    Alphabet a;
    if (lang == "hi") {
        for (char32_t c = 0x0915; c <= 0x0939; ++c) {
            a.letters.push_back(c);
        }
        for (char32_t c = 0x0905; c <= 0x0914; ++c) {
            a.letters.push_back(c);
        }
        a.marks = {0x093E, 0x093F, 0x0940, 0x0941, 0x0942, 0x0947, 0x0948, 0x094B};
        return a;
    }
    if (lang == "ta") {
        a.letters = {0x0B85, 0x0B86, 0x0B87, 0x0B89, 0x0B8E, 0x0B95, 0x0B99, 0x0B9A,
                     0x0B9E, 0x0B9F, 0x0BA3, 0x0BA4, 0x0BA8, 0x0BAA, 0x0BAE, 0x0BAF,
                     0x0BB0, 0x0BB2, 0x0BB3, 0x0BB5};
        a.marks = {0x0BBE, 0x0BBF, 0x0BC0, 0x0BC1, 0x0BC6, 0x0BC7};
        return a;
    }
    for (char32_t c = U'a'; c <= U'z'; ++c) {
        a.letters.push_back(c);
    }
    if (lang == "fr") {
        for (char32_t c : {0x00E0, 0x00E2, 0x00E7, 0x00E8, 0x00E9, 0x00EA, 0x00EE,
                           0x00F4, 0x00F9, 0x00FB}) {
            a.letters.push_back(static_cast<char32_t>(c));
        }
    }
    return a;
}

std::string make_word(Rng& rng, const Alphabet& alphabet) {
    const std::size_t syllables = 2 + rng.below(3);
    std::vector<char32_t> cps;
    for (std::size_t s = 0; s < syllables; ++s) {
        cps.push_back(alphabet.letters[rng.below(alphabet.letters.size())]);
        if (!alphabet.marks.empty() && rng.uniform01() < 0.5) {
            cps.push_back(alphabet.marks[rng.below(alphabet.marks.size())]);
        } else if (alphabet.marks.empty()) {
            cps.push_back(alphabet.letters[rng.below(alphabet.letters.size())]);
        }
    }
    return utf8_encode(cps);
}

std::vector<std::string> make_vocabulary(Rng& rng, const Alphabet& alphabet,
                                         std::size_t size) {
    std::set<std::string> seen;
    std::vector<std::string> words;
    words.reserve(size);
    while (words.size() < size) {
        std::string word = make_word(rng, alphabet);
        if (seen.insert(word).second) {
            words.push_back(std::move(word));
        }
    }
    return words;
}

std::vector<double> zipf_cdf(std::size_t count) {
    std::vector<double> cdf(count);
    double running = 0.0;
    for (std::size_t r = 0; r < count; ++r) {
        running += 1.0 / static_cast<double>(r + 1);
        cdf[r] = running;
    }
    return cdf;
}

std::string apply_typo(Rng& rng, const std::string& token, const Alphabet& alphabet) {
    std::vector<char32_t> cps = utf8_decode(token);
    if (cps.empty()) {
        return token;
    }
    // Kinds: 0 swap, 1 deletion, 2 substitution; length-1 tokens can only
    // take a substitution.
    const std::size_t kind = cps.size() >= 2 ? rng.below(3) : 2;
    if (kind == 0) {
        const std::size_t i = rng.below(cps.size() - 1);
        std::swap(cps[i], cps[i + 1]);
    } else if (kind == 1) {
        const std::size_t i = rng.below(cps.size());
        cps.erase(cps.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
        const std::size_t i = rng.below(cps.size());
        cps[i] = alphabet.letters[rng.below(alphabet.letters.size())];
    }
    return utf8_encode(cps);
}

} // namespace

SignalKind signal_kind_from_string(const std::string& name) {
    if (name == "blocks") {
        return SignalKind::blocks;
    }
    if (name == "bumps") {
        return SignalKind::bumps;
    }
    if (name == "doppler") {
        return SignalKind::doppler;
    }
    if (name == "sine") {
        return SignalKind::sine;
    }
    throw std::invalid_argument("unknown signal kind: " + name);
}

std::string to_string(SignalKind kind) {
    switch (kind) {
        case SignalKind::blocks: return "blocks";
        case SignalKind::bumps: return "bumps";
        case SignalKind::doppler: return "doppler";
        case SignalKind::sine: return "sine";
    }
    throw std::invalid_argument("unknown signal kind");
}

Signal gen_signal(SignalKind kind, std::size_t n, std::uint64_t seed) {
    (void)seed;
    if (n < 8) {
        throw std::invalid_argument("signal length must be at least 8");
    }
    Signal x(n, 0.0);
    switch (kind) {
        case SignalKind::blocks:
            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / static_cast<double>(n);
                double v = 0.0;
                for (std::size_t j = 0; j < std::size(kJumpPos); ++j) {
                    if (t >= kJumpPos[j]) {
                        v += kBlockHeights[j];
                    }
                }
                x[i] = v;
            }
            break;
        case SignalKind::bumps:
            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / static_cast<double>(n);
                double v = 0.0;
                for (std::size_t j = 0; j < std::size(kJumpPos); ++j) {
                    const double u = std::fabs((t - kJumpPos[j]) / kBumpWidths[j]);
                    v += kBumpHeights[j] * std::pow(1.0 + u, -4.0);
                }
                x[i] = v;
            }
            break;
        case SignalKind::doppler:
            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / static_cast<double>(n);
                x[i] = std::sqrt(t * (1.0 - t)) * std::sin(2.0 * kPi * 1.05 / (t + 0.05));
            }
            break;
        case SignalKind::sine:
            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / static_cast<double>(n);
                x[i] = std::sin(2.0 * kPi * 4.0 * t);
            }
            break;
    }
    peak_normalize(x);
    return x;
}

std::pair<Signal, double> add_awgn(const Signal& x, const NoiseSpec& spec) {
    double power = 0.0;
    for (double v : x) {
        power += v * v;
    }
    if (x.empty() || power == 0.0) {
        throw std::invalid_argument("all-zero input");
    }
    if (!spec.target_snr_db) {
        return {x, 0.0};
    }
    if (!std::isfinite(*spec.target_snr_db)) {
        throw std::invalid_argument("target SNR must be finite");
    }
    power /= static_cast<double>(x.size());
    const double sigma = std::sqrt(power / std::pow(10.0, *spec.target_snr_db / 10.0));
    Rng rng(derive_seed(spec.seed, tag_hash("awgn")));
    Signal noisy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        noisy[i] = x[i] + sigma * rng.normal();
    }
    return {std::move(noisy), sigma};
}

std::vector<RawDocument> gen_corpus(const CorpusSpec& spec) {
    if (spec.languages.empty()) {
        throw std::invalid_argument("at least one language required");
    }
    if (spec.typo_rate < 0.0 || spec.typo_rate > 1.0 || spec.threat_rate < 0.0 ||
        spec.threat_rate > 1.0) {
        throw std::invalid_argument("rates must lie in [0, 1]");
    }
    if (spec.doc_length_mean < 1) {
        throw std::invalid_argument("doc length mean must be positive");
    }

    std::vector<RawDocument> docs;
    for (std::size_t li = 0; li < spec.languages.size(); ++li) {
        const LanguageSpec& lang = spec.languages[li];
        if (lang.vocab_size < 8) {
            throw std::invalid_argument("vocab size must be at least 8");
        }
        const Alphabet alphabet = alphabet_for(lang.lang);
        Rng vocab_rng(derive_seed(spec.seed, tag_hash(lang.lang + "/vocab")));
        const std::vector<std::string> words =
            make_vocabulary(vocab_rng, alphabet, lang.vocab_size);

        // Legit documents draw Zipf-style over the whole vocabulary; threat
        // documents draw over the last quarter, which legit text rarely
        // reaches, giving them their own high-frequency terms.
        const std::vector<double> legit_cdf = zipf_cdf(words.size());
        const std::size_t pool_start = (3 * words.size()) / 4;
        const std::vector<double> threat_cdf = zipf_cdf(words.size() - pool_start);

        for (std::size_t di = 0; di < lang.doc_count; ++di) {
            Rng rng(derive_seed(spec.seed,
                                tag_hash(lang.lang) * 0x10001ULL + di * 2654435761ULL + 1));
            RawDocument doc;
            char idbuf[64];
            std::snprintf(idbuf, sizeof(idbuf), "%s-%05zu", lang.lang.c_str(), di);
            doc.id = idbuf;
            doc.lang = lang.lang;
            const bool threat = rng.uniform01() < spec.threat_rate;
            doc.label = threat ? Label::threat : Label::legit;

            std::size_t length = rng.poisson(static_cast<double>(spec.doc_length_mean));
            length = std::max<std::size_t>(length, 1);
            std::string text;
            for (std::size_t t = 0; t < length; ++t) {
                std::size_t word_idx;
                if (threat) {
                    word_idx = pool_start + rng.pick_cdf(threat_cdf);
                } else {
                    word_idx = rng.pick_cdf(legit_cdf);
                }
                std::string token = words[word_idx];
                if (spec.typo_rate > 0.0 && rng.uniform01() < spec.typo_rate) {
                    token = apply_typo(rng, token, alphabet);
                }
                if (!text.empty()) {
                    text.push_back(' ');
                }
                text += token;
            }
            doc.text = std::move(text);
            docs.push_back(std::move(doc));
        }
    }
    return docs;
}

} // namespace wesma
