#include "wesma/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "wesma/autoencoder.hpp"
#include "wesma/errors.hpp"
#include "wesma/evalkit.hpp"
#include "wesma/io.hpp"
#include "wesma/rng.hpp"
#include "wesma/svg.hpp"

namespace wesma {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------
// Config parsing

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    if (!obj.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

double get_number(const json& obj, const std::string& key, double fallback,
                  const std::string& where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj.at(key).is_number()) {
        throw ConfigError(where + "." + key + ": expected a number");
    }
    return obj.at(key).get<double>();
}

std::int64_t get_integer(const json& obj, const std::string& key, std::int64_t fallback,
                         const std::string& where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj.at(key).is_number_integer()) {
        throw ConfigError(where + "." + key + ": expected an integer");
    }
    return obj.at(key).get<std::int64_t>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& fallback,
                       const std::string& where) {
    if (!obj.contains(key)) {
        return fallback;
    }
    if (!obj.at(key).is_string()) {
        throw ConfigError(where + "." + key + ": expected a string");
    }
    return obj.at(key).get<std::string>();
}

DenoiseConfig parse_denoise_config(const json& j, const std::string& where) {
    require_keys(j, {"input", "reference", "filter", "levels", "rule", "sigma", "threshold"},
                 where);
    DenoiseConfig cfg;
    cfg.filter_name = get_string(j, "filter", "haar", where);
    cfg.levels = static_cast<int>(get_integer(j, "levels", 5, where));
    if (cfg.levels < 1) {
        throw ConfigError(where + ".levels: must be positive");
    }
    try {
        cfg.rule = threshold_rule_from_string(get_string(j, "rule", "soft", where));
        wavelet_filter(cfg.filter_name);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
    if (j.contains("sigma")) {
        if (j.at("sigma").is_number()) {
            cfg.known_sigma = j.at("sigma").get<double>();
            if (*cfg.known_sigma < 0.0) {
                throw ConfigError(where + ".sigma: must be non-negative");
            }
        } else if (j.at("sigma") != json("mad")) {
            throw ConfigError(where + ".sigma: expected a number or \"mad\"");
        }
    }
    if (j.contains("threshold")) {
        if (j.at("threshold").is_number()) {
            cfg.manual_threshold = j.at("threshold").get<double>();
            if (*cfg.manual_threshold < 0.0) {
                throw ConfigError(where + ".threshold: must be non-negative");
            }
        } else if (j.at("threshold") != json("universal")) {
            throw ConfigError(where + ".threshold: expected a number or \"universal\"");
        }
    }
    return cfg;
}

} // namespace

RunConfig run_config_from_json(const json& j) {
    require_keys(j,
                 {"seed", "out_dir", "datagen", "decompose", "denoise", "eval_denoise",
                  "textprep", "embed", "wesma", "eval"},
                 "config");
    RunConfig cfg;
    const std::int64_t seed = get_integer(j, "seed", 1, "config");
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.out_dir = get_string(j, "out_dir", "out", "config");

    if (j.contains("datagen")) {
        const json& dg = j.at("datagen");
        require_keys(dg, {"signal", "corpus"}, "datagen");
        if (dg.contains("signal")) {
            const json& sg = dg.at("signal");
            require_keys(sg, {"kinds", "length", "target_snr_db"}, "datagen.signal");
            if (sg.contains("kinds")) {
                cfg.signal_gen.kinds.clear();
                for (const auto& kind : sg.at("kinds")) {
                    try {
                        cfg.signal_gen.kinds.push_back(
                            signal_kind_from_string(kind.get<std::string>()));
                    } catch (const std::exception& e) {
                        throw ConfigError(std::string("datagen.signal.kinds: ") + e.what());
                    }
                }
            }
            cfg.signal_gen.length = static_cast<std::size_t>(
                get_integer(sg, "length", 2048, "datagen.signal"));
            if (sg.contains("target_snr_db")) {
                if (sg.at("target_snr_db") == json("clean")) {
                    cfg.signal_gen.target_snr_db.reset();
                } else if (sg.at("target_snr_db").is_number()) {
                    cfg.signal_gen.target_snr_db = sg.at("target_snr_db").get<double>();
                } else {
                    throw ConfigError(
                        "datagen.signal.target_snr_db: expected a number or \"clean\"");
                }
            }
        }
        if (dg.contains("corpus")) {
            const json& cj = dg.at("corpus");
            require_keys(cj, {"languages", "doc_length_mean", "typo_rate", "threat_rate"},
                         "datagen.corpus");
            CorpusSpec spec;
            if (!cj.contains("languages") || cj.at("languages").empty()) {
                throw ConfigError("datagen.corpus.languages: at least one language required");
            }
            for (const auto& lj : cj.at("languages")) {
                require_keys(lj, {"lang", "vocab_size", "doc_count"},
                             "datagen.corpus.languages[]");
                LanguageSpec lang;
                lang.lang = lj.at("lang").get<std::string>();
                lang.vocab_size = lj.at("vocab_size").get<std::size_t>();
                lang.doc_count = lj.at("doc_count").get<std::size_t>();
                spec.languages.push_back(std::move(lang));
            }
            spec.doc_length_mean = static_cast<std::size_t>(
                get_integer(cj, "doc_length_mean", 40, "datagen.corpus"));
            spec.typo_rate = get_number(cj, "typo_rate", 0.0, "datagen.corpus");
            spec.threat_rate = get_number(cj, "threat_rate", 0.0, "datagen.corpus");
            if (spec.typo_rate < 0.0 || spec.typo_rate > 1.0 || spec.threat_rate < 0.0 ||
                spec.threat_rate > 1.0) {
                throw ConfigError("datagen.corpus: rates must lie in [0, 1]");
            }
            cfg.corpus = std::move(spec);
        }
    }

    if (j.contains("decompose")) {
        const json& dj = j.at("decompose");
        require_keys(dj, {"input", "filter", "levels"}, "decompose");
        DecomposeConfig dc;
        dc.input = get_string(dj, "input", "", "decompose");
        dc.filter = get_string(dj, "filter", "db2", "decompose");
        dc.levels = static_cast<int>(get_integer(dj, "levels", 3, "decompose"));
        if (dc.input.empty()) {
            throw ConfigError("decompose.input: required");
        }
        try {
            wavelet_filter(dc.filter);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("decompose.filter: ") + e.what());
        }
        cfg.decompose = std::move(dc);
    }

    if (j.contains("denoise")) {
        DenoiseStageConfig dn;
        dn.denoise = parse_denoise_config(j.at("denoise"), "denoise");
        dn.input = get_string(j.at("denoise"), "input", "", "denoise");
        dn.reference = get_string(j.at("denoise"), "reference", "", "denoise");
        if (dn.input.empty()) {
            throw ConfigError("denoise.input: required");
        }
        cfg.denoise_stage = std::move(dn);
    }

    if (j.contains("eval_denoise")) {
        const json& ej = j.at("eval_denoise");
        require_keys(ej, {"languages", "signal", "length", "seeds", "filter", "levels", "rule"},
                     "eval_denoise");
        if (ej.contains("languages")) {
            cfg.eval_denoise.languages.clear();
            for (const auto& lj : ej.at("languages")) {
                require_keys(lj, {"lang", "initial_snr_db"}, "eval_denoise.languages[]");
                EvalDenoiseLanguage lang;
                lang.lang = lj.at("lang").get<std::string>();
                lang.initial_snr_db = lj.at("initial_snr_db").get<double>();
                cfg.eval_denoise.languages.push_back(std::move(lang));
            }
        }
        try {
            cfg.eval_denoise.signal =
                signal_kind_from_string(get_string(ej, "signal", "blocks", "eval_denoise"));
            cfg.eval_denoise.denoise.rule =
                threshold_rule_from_string(get_string(ej, "rule", "soft", "eval_denoise"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("eval_denoise: ") + e.what());
        }
        cfg.eval_denoise.length =
            static_cast<std::size_t>(get_integer(ej, "length", 2048, "eval_denoise"));
        cfg.eval_denoise.seeds =
            static_cast<std::size_t>(get_integer(ej, "seeds", 20, "eval_denoise"));
        cfg.eval_denoise.denoise.filter_name =
            get_string(ej, "filter", "haar", "eval_denoise");
        cfg.eval_denoise.denoise.levels =
            static_cast<int>(get_integer(ej, "levels", 5, "eval_denoise"));
    }

    if (j.contains("textprep")) {
        const json& tj = j.at("textprep");
        require_keys(tj, {"profiles_dir", "min_count", "corpus"}, "textprep");
        cfg.textprep.profiles_dir = get_string(tj, "profiles_dir", "profiles", "textprep");
        cfg.textprep.min_count =
            static_cast<int>(get_integer(tj, "min_count", 2, "textprep"));
        if (cfg.textprep.min_count < 1) {
            throw ConfigError("textprep.min_count: must be positive");
        }
    }

    if (j.contains("embed")) {
        const json& ej = j.at("embed");
        require_keys(ej, {"dim", "window", "negatives", "learning_rate", "epochs"}, "embed");
        cfg.cbow.dim = static_cast<std::size_t>(get_integer(ej, "dim", 32, "embed"));
        cfg.cbow.window = static_cast<std::size_t>(get_integer(ej, "window", 4, "embed"));
        cfg.cbow.negatives =
            static_cast<std::size_t>(get_integer(ej, "negatives", 5, "embed"));
        cfg.cbow.learning_rate = get_number(ej, "learning_rate", 0.05, "embed");
        cfg.cbow.epochs = static_cast<std::size_t>(get_integer(ej, "epochs", 5, "embed"));
        if (cfg.cbow.dim < 2 || cfg.cbow.window < 1 || cfg.cbow.negatives < 1 ||
            cfg.cbow.learning_rate <= 0.0 || cfg.cbow.epochs < 1) {
            throw ConfigError("embed: all parameters must be positive (dim >= 2)");
        }
    }

    if (j.contains("wesma")) {
        const json& wj = j.at("wesma");
        require_keys(wj,
                     {"layers", "lambda", "p0", "alpha", "p_max", "repr_mode", "seed_terms",
                      "auto_seed_count", "fusion", "calibrate", "signal"},
                     "wesma");
        cfg.wesma.layers = static_cast<int>(get_integer(wj, "layers", 2, "wesma"));
        cfg.wesma.lambda = get_number(wj, "lambda", 1e-3, "wesma");
        cfg.wesma.p0 = get_number(wj, "p0", 0.3, "wesma");
        cfg.wesma.alpha = get_number(wj, "alpha", 1.0, "wesma");
        cfg.wesma.p_max = get_number(wj, "p_max", 0.9, "wesma");
        cfg.wesma.repr_mode = get_string(wj, "repr_mode", "concat", "wesma");
        cfg.wesma.auto_seed_count =
            static_cast<std::size_t>(get_integer(wj, "auto_seed_count", 10, "wesma"));
        if (wj.contains("fusion")) {
            if (!wj.at("fusion").is_boolean()) {
                throw ConfigError("wesma.fusion: expected a boolean");
            }
            cfg.wesma.fusion = wj.at("fusion").get<bool>();
        }
        if (wj.contains("calibrate")) {
            if (!wj.at("calibrate").is_boolean()) {
                throw ConfigError("wesma.calibrate: expected a boolean");
            }
            cfg.wesma.calibrate = wj.at("calibrate").get<bool>();
        }
        if (wj.contains("seed_terms")) {
            for (const auto& term : wj.at("seed_terms")) {
                cfg.wesma.seed_terms.push_back(term.get<std::string>());
            }
        }
        if (cfg.wesma.layers < 1 || cfg.wesma.lambda < 0.0 || cfg.wesma.p0 <= 0.0 ||
            cfg.wesma.p0 >= 1.0 || cfg.wesma.alpha < 0.0 || cfg.wesma.p_max <= 0.0 ||
            cfg.wesma.p_max >= 1.0 || cfg.wesma.p0 > cfg.wesma.p_max) {
            throw ConfigError("wesma: parameter out of range");
        }
        try {
            repr_mode_from_string(cfg.wesma.repr_mode);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("wesma.repr_mode: ") + e.what());
        }
        if (wj.contains("signal")) {
            const json& sj = wj.at("signal");
            require_keys(sj, {"projections", "target_length", "levels", "filter"},
                         "wesma.signal");
            cfg.wesma.signal.projections =
                static_cast<std::size_t>(get_integer(sj, "projections", 3, "wesma.signal"));
            cfg.wesma.signal.target_length = static_cast<std::size_t>(
                get_integer(sj, "target_length", 64, "wesma.signal"));
            cfg.wesma.signal.levels =
                static_cast<int>(get_integer(sj, "levels", 3, "wesma.signal"));
            cfg.wesma.signal.filter = get_string(sj, "filter", "haar", "wesma.signal");
            const std::size_t len = cfg.wesma.signal.target_length;
            if (cfg.wesma.signal.projections < 1 || len < 4 || (len & (len - 1)) != 0) {
                throw ConfigError(
                    "wesma.signal: projections must be positive and target_length a power "
                    "of two >= 4");
            }
            try {
                wavelet_filter(cfg.wesma.signal.filter);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("wesma.signal.filter: ") + e.what());
            }
        }
    }

    if (j.contains("eval")) {
        const json& ej = j.at("eval");
        require_keys(ej, {"ratios"}, "eval");
        if (ej.contains("ratios")) {
            const auto ratios = ej.at("ratios").get<std::vector<double>>();
            if (ratios.size() != 3) {
                throw ConfigError("eval.ratios: expected three values");
            }
            double sum = 0.0;
            for (double r : ratios) {
                if (!(r > 0.0)) {
                    throw ConfigError("eval.ratios: every ratio must be positive");
                }
                sum += r;
            }
            if (std::fabs(sum - 1.0) > 1e-9) {
                throw ConfigError("eval.ratios: must sum to 1");
            }
            cfg.eval.ratios = {ratios[0], ratios[1], ratios[2]};
        }
    }
    return cfg;
}

RunConfig load_run_config(const fs::path& path) {
    json j;
    try {
        j = parse_json_file(path);
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    return run_config_from_json(j);
}

namespace {

fs::path resolve(const RunConfig& cfg, const std::string& p) {
    (void)cfg;
    return fs::path(p);
}

fs::path artifact(const RunConfig& cfg, const std::string& name) {
    return cfg.out_dir / name;
}

void require_file(const fs::path& path, const std::string& what) {
    if (!fs::exists(path)) {
        throw ConfigError(what + " not found: " + path.string());
    }
}

// ---------------------------------------------------------------------
// Shared stage plumbing

struct TokenizedDoc {
    std::string id;
    std::string lang;
    std::optional<Label> label;
    std::vector<std::string> tokens;
};

void write_tokens_jsonl(const fs::path& path, const std::vector<TokenizedDoc>& docs) {
    std::string out;
    for (const TokenizedDoc& doc : docs) {
        json j{{"id", doc.id}, {"lang", doc.lang}, {"tokens", doc.tokens}};
        if (doc.label) {
            j["label"] = to_string(*doc.label);
        }
        out += j.dump();
        out.push_back('\n');
    }
    atomic_write_text(path, out);
}

std::vector<TokenizedDoc> read_tokens_jsonl(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::vector<TokenizedDoc> docs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError(path.string() + ": " + e.what());
        }
        TokenizedDoc doc;
        doc.id = j.at("id").get<std::string>();
        doc.lang = j.at("lang").get<std::string>();
        doc.tokens = j.at("tokens").get<std::vector<std::string>>();
        if (j.contains("label")) {
            doc.label = label_from_string(j.at("label").get<std::string>());
        }
        docs.push_back(std::move(doc));
    }
    if (docs.empty()) {
        throw DataError(path.string() + ": no documents");
    }
    return docs;
}

void write_vocab_json(const fs::path& path, const Vocabulary& vocab,
                      std::size_t corpus_size) {
    const json j{{"tokens", vocab.tokens},
                 {"doc_freq", vocab.doc_freq},
                 {"corpus_size", corpus_size}};
    atomic_write_text(path, j.dump(2) + "\n");
}

std::pair<Vocabulary, std::size_t> read_vocab_json(const fs::path& path) {
    const json j = parse_json_file(path);
    Vocabulary vocab;
    vocab.tokens = j.at("tokens").get<std::vector<std::string>>();
    vocab.doc_freq = j.at("doc_freq").get<std::vector<int>>();
    if (vocab.tokens.size() != vocab.doc_freq.size() || vocab.tokens.empty()) {
        throw DataError(path.string() + ": malformed vocabulary");
    }
    for (std::size_t i = 0; i < vocab.tokens.size(); ++i) {
        vocab.token_to_index[vocab.tokens[i]] = static_cast<int>(i);
    }
    return {std::move(vocab), j.at("corpus_size").get<std::size_t>()};
}

std::vector<int> index_tokens(const std::vector<std::string>& tokens,
                              const Vocabulary& vocab) {
    std::vector<int> indices;
    indices.reserve(tokens.size());
    for (const std::string& token : tokens) {
        const int idx = vocab.index_of(token);
        if (idx >= 0) {
            indices.push_back(idx);
        }
    }
    return indices;
}

// Subband energies of every projected token signal, concatenated in
// projection order; documents with no in-vocabulary token get zeros.
std::vector<double> doc_subband_features(const std::vector<int>& indices,
                                         const EmbeddingMatrix& embeddings,
                                         const Matrix& projections,
                                         const TokenSignalConfig& cfg,
                                         const WaveletFilter& filter) {
    const std::size_t per_proj = static_cast<std::size_t>(cfg.levels) + 1;
    if (indices.empty()) {
        return std::vector<double>(projections.rows * per_proj, 0.0);
    }
    const std::vector<Signal> signals =
        token_signal(indices, embeddings, projections, cfg.target_length);
    std::vector<double> features;
    features.reserve(projections.rows * per_proj);
    for (const Signal& s : signals) {
        const UwtDecomposition dec = uwt_forward(s, filter, cfg.levels);
        const std::vector<double> e = subband_energy_features(dec);
        features.insert(features.end(), e.begin(), e.end());
    }
    return features;
}

Matrix column_matrix(const std::vector<std::vector<double>>& columns) {
    if (columns.empty()) {
        throw DataError("no examples");
    }
    Matrix m(columns.front().size(), columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != m.rows) {
            throw DataError("inconsistent feature dimensions");
        }
        for (std::size_t i = 0; i < m.rows; ++i) {
            m.at(i, j) = columns[j][i];
        }
    }
    return m;
}

struct ScoreRow {
    std::string id;
    std::string lang;
    std::string label; // may be empty
    std::string split;
    double score = 0.0;
};

void write_scores_csv(const fs::path& path, const std::vector<ScoreRow>& rows) {
    std::string out = "id,lang,label,split,score\n";
    for (const ScoreRow& row : rows) {
        out += row.id + "," + row.lang + "," + row.label + "," + row.split + "," +
               format_double(row.score) + "\n";
    }
    atomic_write_text(path, out);
}

std::vector<ScoreRow> read_scores_csv(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || line != "id,lang,label,split,score") {
        throw DataError(path.string() + ": missing scores header");
    }
    std::vector<ScoreRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::stringstream ss(line);
        ScoreRow row;
        std::string score;
        if (!std::getline(ss, row.id, ',') || !std::getline(ss, row.lang, ',') ||
            !std::getline(ss, row.label, ',') || !std::getline(ss, row.split, ',') ||
            !std::getline(ss, score, ',')) {
            throw DataError(path.string() + ": bad row: " + line);
        }
        row.score = std::strtod(score.c_str(), nullptr);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw DataError(path.string() + ": no scores");
    }
    return rows;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::string median_str(std::vector<double> values) {
    return format_double(median_of(std::move(values)));
}

// Center ln(score) on each language's median legitimate training score, so
// one decision threshold serves every language. Languages without reference
// documents fall back to the pooled median.
void calibrate_scores(std::vector<ScoreRow>& rows) {
    auto transformed = [](double score) { return std::log(score + 1e-12); };
    std::map<std::string, std::vector<double>> reference;
    std::vector<double> pooled;
    for (const ScoreRow& row : rows) {
        if (row.split == "train" && row.label == "legit") {
            reference[row.lang].push_back(transformed(row.score));
            pooled.push_back(transformed(row.score));
        }
    }
    if (pooled.empty()) {
        throw DataError("no legitimate training scores to calibrate against");
    }
    const double pooled_center = median_of(pooled);
    std::map<std::string, double> center_by_lang;
    for (const auto& [lang, values] : reference) {
        center_by_lang[lang] = median_of(values);
    }
    for (ScoreRow& row : rows) {
        const auto it = center_by_lang.find(row.lang);
        const double center = it == center_by_lang.end() ? pooled_center : it->second;
        row.score = transformed(row.score) - center;
    }
}

// ---------------------------------------------------------------------
// Commands

std::string cmd_gen_data(const RunConfig& cfg) {
    std::size_t signal_count = 0;
    for (SignalKind kind : cfg.signal_gen.kinds) {
        const std::string name = to_string(kind);
        const Signal clean =
            gen_signal(kind, cfg.signal_gen.length, derive_seed(cfg.seed, tag_hash(name)));
        write_signal_csv(artifact(cfg, "signals/" + name + ".csv"), clean);
        if (cfg.signal_gen.target_snr_db) {
            NoiseSpec spec;
            spec.target_snr_db = cfg.signal_gen.target_snr_db;
            spec.seed = derive_seed(cfg.seed, tag_hash("gen-data/" + name));
            const auto [noisy, sigma] = add_awgn(clean, spec);
            write_signal_csv(artifact(cfg, "signals/" + name + "_noisy.csv"), noisy);
        }
        ++signal_count;
    }
    std::size_t doc_count = 0;
    if (cfg.corpus) {
        CorpusSpec spec = *cfg.corpus;
        spec.seed = derive_seed(cfg.seed, tag_hash("corpus"));
        const std::vector<RawDocument> docs = gen_corpus(spec);
        write_corpus_jsonl(artifact(cfg, "corpus.jsonl"), docs);
        doc_count = docs.size();
    }
    std::ostringstream summary;
    summary << "gen-data: wrote " << signal_count << " signal(s) and " << doc_count
            << " document(s) to " << cfg.out_dir.string();
    return summary.str();
}

std::string cmd_decompose(const RunConfig& cfg) {
    const DecomposeConfig& dc = *cfg.decompose;
    const Signal x = read_signal_csv(resolve(cfg, dc.input));
    const WaveletFilter filter = wavelet_filter(dc.filter);
    const UwtDecomposition dec = uwt_forward(x, filter, dc.levels);
    write_decomposition_csv(artifact(cfg, "decomposition.csv"), dec);
    std::ostringstream summary;
    summary << "decompose: " << dc.filter << " J=" << dc.levels << " over N=" << x.size()
            << " -> " << artifact(cfg, "decomposition.csv").string();
    return summary.str();
}

std::string cmd_denoise(const RunConfig& cfg) {
    const DenoiseStageConfig& dn = *cfg.denoise_stage;
    const Signal noisy = read_signal_csv(resolve(cfg, dn.input));
    Signal reference;
    const bool has_reference = !dn.reference.empty();
    if (has_reference) {
        reference = read_signal_csv(resolve(cfg, dn.reference));
        if (reference.size() != noisy.size()) {
            throw DataError("reference and input lengths differ");
        }
    }
    const auto [denoised, report] =
        denoise(noisy, dn.denoise, has_reference ? &reference : nullptr);
    write_signal_csv(artifact(cfg, "denoised.csv"), denoised);
    atomic_write_text(artifact(cfg, "denoise_report.json"),
                      denoise_report_to_json(report).dump(2) + "\n");
    if (has_reference) {
        std::string out = "clean,noisy,denoised\n";
        for (std::size_t i = 0; i < noisy.size(); ++i) {
            out += format_double(reference[i]) + "," + format_double(noisy[i]) + "," +
                   format_double(denoised[i]) + "\n";
        }
        atomic_write_text(artifact(cfg, "triples.csv"), out);
    }
    return "denoise: " + denoise_report_to_json(report).dump();
}

std::string cmd_eval_denoise(const RunConfig& cfg) {
    const EvalDenoiseConfig& ed = cfg.eval_denoise;
    std::string table = "language,signal,initial_snr_db,improved_snr_db,improvement_db\n";
    double total_improvement = 0.0;
    for (const EvalDenoiseLanguage& lang : ed.languages) {
        std::vector<double> initial;
        std::vector<double> improved;
        std::vector<double> improvement;
        for (std::size_t s = 0; s < ed.seeds; ++s) {
            const std::uint64_t seed =
                derive_seed(cfg.seed, tag_hash("eval-denoise/" + lang.lang) + s);
            const Signal clean = gen_signal(ed.signal, ed.length, seed);
            NoiseSpec noise;
            noise.target_snr_db = lang.initial_snr_db;
            noise.seed = seed;
            const auto [noisy, sigma] = add_awgn(clean, noise);
            const auto [denoised, report] = denoise(noisy, ed.denoise, &clean);
            initial.push_back(*report.input_snr_db);
            improved.push_back(*report.output_snr_db);
            improvement.push_back(*report.improvement_db);
            total_improvement += *report.improvement_db;
        }
        table += lang.lang + "," + to_string(ed.signal) + "," + median_str(initial) + "," +
                 median_str(improved) + "," + median_str(improvement) + "\n";
    }
    atomic_write_text(artifact(cfg, "denoise_table.csv"), table);
    std::ostringstream summary;
    summary << "eval-denoise: " << ed.languages.size() << " language(s), " << ed.seeds
            << " seed(s), mean improvement "
            << format_double(total_improvement /
                             static_cast<double>(ed.languages.size() * ed.seeds))
            << " dB -> " << artifact(cfg, "denoise_table.csv").string();
    return summary.str();
}

std::string cmd_prep(const RunConfig& cfg) {
    const fs::path corpus_path = artifact(cfg, "corpus.jsonl");
    const std::vector<RawDocument> docs = read_corpus_jsonl(corpus_path);
    if (docs.empty()) {
        throw DataError(corpus_path.string() + ": empty corpus");
    }
    const fs::path profile_dir = resolve(cfg, cfg.textprep.profiles_dir);
    std::map<std::string, LanguageProfile> profiles;
    std::vector<TokenizedDoc> tokenized;
    std::vector<std::vector<std::string>> token_streams;
    for (const RawDocument& doc : docs) {
        auto it = profiles.find(doc.lang);
        if (it == profiles.end()) {
            const fs::path profile_path = profile_dir / (doc.lang + ".json");
            if (!fs::exists(profile_path)) {
                throw DataError("no profile for language: " + doc.lang);
            }
            it = profiles.emplace(doc.lang, read_profile(profile_path)).first;
        }
        TokenizedDoc t;
        t.id = doc.id;
        t.lang = doc.lang;
        t.label = doc.label;
        t.tokens = preprocess(doc.text, it->second);
        token_streams.push_back(t.tokens);
        tokenized.push_back(std::move(t));
    }
    Vocabulary vocab;
    try {
        vocab = build_vocabulary(token_streams, cfg.textprep.min_count);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }
    write_tokens_jsonl(artifact(cfg, "tokens.jsonl"), tokenized);
    write_vocab_json(artifact(cfg, "vocab.json"), vocab, docs.size());
    std::ostringstream summary;
    summary << "prep: " << docs.size() << " document(s), vocabulary " << vocab.size()
            << " token(s)";
    return summary.str();
}

std::string cmd_train_embeddings(const RunConfig& cfg) {
    const std::vector<TokenizedDoc> docs = read_tokens_jsonl(artifact(cfg, "tokens.jsonl"));
    auto [vocab, corpus_size] = read_vocab_json(artifact(cfg, "vocab.json"));
    std::vector<std::vector<int>> corpus;
    corpus.reserve(docs.size());
    for (const TokenizedDoc& doc : docs) {
        corpus.push_back(index_tokens(doc.tokens, vocab));
    }
    CbowConfig cbow = cfg.cbow;
    cbow.seed = derive_seed(cfg.seed, tag_hash("cbow"));
    CbowTrainResult result;
    try {
        result = train_cbow(corpus, vocab, cbow);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }
    write_embeddings_csv(artifact(cfg, "embeddings.csv"), vocab, result.embeddings);
    std::ostringstream summary;
    summary << "train-embeddings: V=" << vocab.size() << " d=" << cbow.dim << " loss "
            << format_double(result.epoch_mean_loss.front()) << " -> "
            << format_double(result.epoch_mean_loss.back());
    return summary.str();
}

std::vector<std::string> auto_seed_terms(const std::vector<TokenizedDoc>& docs,
                                         const std::vector<std::size_t>& train,
                                         const Vocabulary& vocab, std::size_t count) {
    std::map<std::string, int> train_df;
    for (std::size_t idx : train) {
        std::set<std::string> seen(docs[idx].tokens.begin(), docs[idx].tokens.end());
        for (const std::string& token : seen) {
            if (vocab.index_of(token) >= 0) {
                ++train_df[token];
            }
        }
    }
    std::vector<std::pair<std::string, int>> ranked(train_df.begin(), train_df.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });
    std::vector<std::string> terms;
    for (std::size_t i = 0; i < ranked.size() && terms.size() < count; ++i) {
        terms.push_back(ranked[i].first);
    }
    if (terms.empty()) {
        throw DataError("no seed terms available from the training split");
    }
    return terms;
}

std::string cmd_train_wesma(const RunConfig& cfg) {
    const std::vector<TokenizedDoc> docs = read_tokens_jsonl(artifact(cfg, "tokens.jsonl"));
    auto [vocab, corpus_size] = read_vocab_json(artifact(cfg, "vocab.json"));
    auto [emb_tokens, embeddings] = read_embeddings_csv(artifact(cfg, "embeddings.csv"));
    if (emb_tokens != vocab.tokens) {
        throw DataError("embeddings and vocabulary disagree");
    }

    const Split split =
        split_dataset(docs.size(), cfg.eval.ratios, derive_seed(cfg.seed, tag_hash("split")));

    std::vector<std::string> seed_terms = cfg.wesma.seed_terms;
    if (seed_terms.empty()) {
        seed_terms = auto_seed_terms(docs, split.train, vocab, cfg.wesma.auto_seed_count);
    }
    SemanticNoiseConfig noise;
    noise.seed_terms = seed_terms;
    noise.base_p0 = cfg.wesma.p0;
    noise.boost_alpha = cfg.wesma.alpha;
    noise.p_max = cfg.wesma.p_max;
    CorruptionProfile profile;
    try {
        profile = semantic_corruption_profile(vocab, embeddings, noise);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }

    // The autoencoder is fitted on the legitimate training documents only;
    // threats must look unfamiliar to it.
    std::vector<std::vector<double>> train_legit_vectors;
    std::vector<std::size_t> train_indices(split.train.begin(), split.train.end());
    std::sort(train_indices.begin(), train_indices.end());
    for (std::size_t idx : train_indices) {
        if (docs[idx].label && *docs[idx].label == Label::legit) {
            train_legit_vectors.push_back(to_dense(
                vectorize(docs[idx].tokens, vocab, Weighting::tfidf, corpus_size)));
        }
    }
    if (train_legit_vectors.empty()) {
        throw DataError("no legitimate documents in the training split");
    }

    const WesmaModel docvec_model =
        stack_fit(column_matrix(train_legit_vectors), profile, cfg.wesma.layers,
                  cfg.wesma.lambda, repr_mode_from_string(cfg.wesma.repr_mode));

    json model_json{{"docvec_model", model_to_json(docvec_model)},
                    {"corpus_size", corpus_size},
                    {"fusion", cfg.wesma.fusion},
                    {"seed_terms", seed_terms}};

    std::vector<std::string> split_names(docs.size());
    for (std::size_t idx : split.train) {
        split_names[idx] = "train";
    }
    for (std::size_t idx : split.val) {
        split_names[idx] = "val";
    }
    for (std::size_t idx : split.test) {
        split_names[idx] = "test";
    }
    model_json["split"] = split_names;

    if (cfg.wesma.fusion) {
        const std::uint64_t proj_seed = derive_seed(cfg.seed, tag_hash("projections"));
        const Matrix projections =
            signal_projections(embeddings.dim, cfg.wesma.signal.projections, proj_seed);
        const WaveletFilter filter = wavelet_filter(cfg.wesma.signal.filter);

        // Scaler statistics come from the whole training split; the fused
        // model again fits on its legitimate documents only.
        Matrix train_features(train_indices.size(),
                              cfg.wesma.signal.projections *
                                  (static_cast<std::size_t>(cfg.wesma.signal.levels) + 1));
        std::vector<std::vector<double>> fused_legit;
        for (std::size_t row = 0; row < train_indices.size(); ++row) {
            const std::size_t idx = train_indices[row];
            const std::vector<double> features =
                doc_subband_features(index_tokens(docs[idx].tokens, vocab), embeddings,
                                     projections, cfg.wesma.signal, filter);
            for (std::size_t k = 0; k < features.size(); ++k) {
                train_features.at(row, k) = features[k];
            }
        }
        const FeatureScaler scaler = fit_scaler(train_features);
        for (std::size_t row = 0; row < train_indices.size(); ++row) {
            const std::size_t idx = train_indices[row];
            if (!docs[idx].label || *docs[idx].label != Label::legit) {
                continue;
            }
            const std::vector<double> x =
                to_dense(vectorize(docs[idx].tokens, vocab, Weighting::tfidf, corpus_size));
            std::vector<double> features(train_features.cols);
            for (std::size_t k = 0; k < features.size(); ++k) {
                features[k] = train_features.at(row, k);
            }
            fused_legit.push_back(fuse(transform(docvec_model, x), features, scaler));
        }
        const Matrix fused = column_matrix(fused_legit);
        const WesmaModel fused_model =
            stack_fit(fused, uniform_corruption_profile(fused.rows, cfg.wesma.p0), 1,
                      cfg.wesma.lambda, ReprMode::last);
        model_json["fused_model"] = model_to_json(fused_model);
        model_json["scaler"] = scaler_to_json(scaler);
        model_json["signal"] = json{{"projections", cfg.wesma.signal.projections},
                                    {"target_length", cfg.wesma.signal.target_length},
                                    {"levels", cfg.wesma.signal.levels},
                                    {"filter", cfg.wesma.signal.filter},
                                    {"seed", proj_seed}};
    }

    atomic_write_text(artifact(cfg, "wesma_model.json"), model_json.dump(2) + "\n");
    std::ostringstream summary;
    summary << "train-wesma: " << cfg.wesma.layers << " layer(s) on "
            << train_legit_vectors.size() << " legit train doc(s), D=" << vocab.size()
            << (cfg.wesma.fusion ? ", fused scorer" : "");
    return summary.str();
}

std::string cmd_score(const RunConfig& cfg) {
    const std::vector<TokenizedDoc> docs = read_tokens_jsonl(artifact(cfg, "tokens.jsonl"));
    auto [vocab, corpus_size_unused] = read_vocab_json(artifact(cfg, "vocab.json"));
    auto [emb_tokens, embeddings] = read_embeddings_csv(artifact(cfg, "embeddings.csv"));
    if (emb_tokens != vocab.tokens) {
        throw DataError("embeddings and vocabulary disagree");
    }
    const json model_json = parse_json_file(artifact(cfg, "wesma_model.json"));
    const WesmaModel docvec_model = model_from_json(model_json.at("docvec_model"));
    const std::size_t corpus_size = model_json.at("corpus_size").get<std::size_t>();
    const auto split_names = model_json.at("split").get<std::vector<std::string>>();
    if (split_names.size() != docs.size()) {
        throw DataError("model split does not match the token file");
    }
    const bool fusion = model_json.at("fusion").get<bool>();

    WesmaModel fused_model;
    FeatureScaler scaler;
    Matrix projections;
    TokenSignalConfig signal_cfg;
    WaveletFilter filter;
    if (fusion) {
        fused_model = model_from_json(model_json.at("fused_model"));
        scaler = scaler_from_json(model_json.at("scaler"));
        const json& sj = model_json.at("signal");
        signal_cfg.projections = sj.at("projections").get<std::size_t>();
        signal_cfg.target_length = sj.at("target_length").get<std::size_t>();
        signal_cfg.levels = sj.at("levels").get<int>();
        signal_cfg.filter = sj.at("filter").get<std::string>();
        filter = wavelet_filter(signal_cfg.filter);
        projections = signal_projections(embeddings.dim, signal_cfg.projections,
                                         sj.at("seed").get<std::uint64_t>());
    }

    std::vector<ScoreRow> rows;
    rows.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
        const TokenizedDoc& doc = docs[i];
        const std::vector<double> x =
            to_dense(vectorize(doc.tokens, vocab, Weighting::tfidf, corpus_size));
        double score = 0.0;
        if (fusion) {
            const std::vector<double> features = doc_subband_features(
                index_tokens(doc.tokens, vocab), embeddings, projections, signal_cfg, filter);
            const std::vector<double> fused =
                fuse(transform(docvec_model, x), features, scaler);
            score = reconstruction_error(fused_model, fused);
        } else {
            score = reconstruction_error(docvec_model, x);
        }
        ScoreRow row;
        row.id = doc.id;
        row.lang = doc.lang;
        row.label = doc.label ? to_string(*doc.label) : "";
        row.split = split_names[i];
        row.score = score;
        rows.push_back(std::move(row));
    }
    if (cfg.wesma.calibrate) {
        calibrate_scores(rows);
    }
    write_scores_csv(artifact(cfg, "scores.csv"), rows);
    std::ostringstream summary;
    summary << "score: " << rows.size() << " document(s) -> "
            << artifact(cfg, "scores.csv").string();
    return summary.str();
}

std::string cmd_evaluate(const RunConfig& cfg) {
    const std::vector<ScoreRow> rows = read_scores_csv(artifact(cfg, "scores.csv"));
    std::vector<double> val_scores;
    std::vector<Label> val_labels;
    std::vector<double> test_scores;
    std::vector<Label> test_labels;
    for (const ScoreRow& row : rows) {
        if (row.label.empty()) {
            continue;
        }
        const Label label = label_from_string(row.label);
        if (row.split == "val") {
            val_scores.push_back(row.score);
            val_labels.push_back(label);
        } else if (row.split == "test") {
            test_scores.push_back(row.score);
            test_labels.push_back(label);
        }
    }
    if (val_scores.empty() || test_scores.empty()) {
        throw DataError("validation or test split has no labeled scores");
    }
    const double threshold = select_threshold(val_scores, val_labels);
    const double auc = roc_auc(test_scores, test_labels);
    const ConfusionCounts counts = confusion(test_scores, test_labels, threshold);
    const MetricsReport report = metrics(counts, auc);

    atomic_write_text(artifact(cfg, "metrics.json"), metrics_to_json(report).dump(2) + "\n");
    write_curve_csv(artifact(cfg, "roc.csv"),
                    curve_points(test_scores, test_labels, CurveKind::roc));
    write_curve_csv(artifact(cfg, "pr.csv"),
                    curve_points(test_scores, test_labels, CurveKind::pr));
    json threshold_json{{"tp", counts.tp}, {"fp", counts.fp}, {"tn", counts.tn},
                        {"fn", counts.fn}};
    if (std::isinf(threshold)) {
        threshold_json["threshold"] = threshold > 0 ? "inf" : "-inf";
    } else {
        threshold_json["threshold"] = threshold;
    }
    atomic_write_text(artifact(cfg, "threshold.json"), threshold_json.dump(2) + "\n");

    std::ostringstream summary;
    summary << "evaluate: auc=" << format_double(report.auc)
            << " f1=" << format_double(report.f1)
            << " accuracy=" << format_double(report.accuracy) << " (test n="
            << test_scores.size() << ")";
    return summary.str();
}

std::vector<std::pair<double, double>> csv_series(const fs::path& path, std::size_t x_col,
                                                  std::size_t y_col) {
    std::istringstream in(read_text(path));
    std::string line;
    std::getline(in, line); // header
    std::vector<std::pair<double, double>> points;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() <= std::max(x_col, y_col)) {
            throw DataError(path.string() + ": short row");
        }
        points.emplace_back(std::strtod(cells[x_col].c_str(), nullptr),
                            std::strtod(cells[y_col].c_str(), nullptr));
    }
    return points;
}

std::string cmd_report(const RunConfig& cfg) {
    std::vector<std::string> rendered;
    const fs::path roc = artifact(cfg, "roc.csv");
    if (fs::exists(roc)) {
        SvgSeries series{"roc", "#1f77b4", csv_series(roc, 0, 1)};
        SvgSeries diagonal{"chance", "#bbbbbb", {{0.0, 0.0}, {1.0, 1.0}}};
        atomic_write_text(
            artifact(cfg, "report/roc.svg"),
            render_line_plot("ROC curve", "false positive rate", "true positive rate",
                             {diagonal, series}));
        rendered.push_back("roc.svg");
    }
    const fs::path pr = artifact(cfg, "pr.csv");
    if (fs::exists(pr)) {
        SvgSeries series{"precision-recall", "#d62728", csv_series(pr, 0, 1)};
        atomic_write_text(artifact(cfg, "report/pr.svg"),
                          render_line_plot("Precision-recall curve", "recall", "precision",
                                           {series}));
        rendered.push_back("pr.svg");
    }
    const fs::path triples = artifact(cfg, "triples.csv");
    if (fs::exists(triples)) {
        auto indexed = [&](std::size_t col, const char* name, const char* color) {
            SvgSeries s;
            s.name = name;
            s.color = color;
            const auto raw = csv_series(triples, col, col);
            s.points.reserve(raw.size());
            for (std::size_t i = 0; i < raw.size(); ++i) {
                s.points.emplace_back(static_cast<double>(i), raw[i].second);
            }
            return s;
        };
        atomic_write_text(
            artifact(cfg, "report/waveforms.svg"),
            render_line_plot("Waveforms", "sample", "amplitude",
                             {indexed(1, "noisy", "#cccccc"), indexed(0, "clean", "#2ca02c"),
                              indexed(2, "denoised", "#1f77b4")}));
        rendered.push_back("waveforms.svg");
    }
    if (rendered.empty()) {
        throw ConfigError("report: no curve or waveform artifacts found in " +
                          cfg.out_dir.string());
    }
    std::ostringstream summary;
    summary << "report: rendered";
    for (const std::string& name : rendered) {
        summary << " " << name;
    }
    return summary.str();
}

} // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{
        "gen-data", "decompose", "denoise", "eval-denoise", "prep",
        "train-embeddings", "train-wesma", "score", "evaluate", "report"};
    return names;
}

void validate_for_command(const RunConfig& cfg, const std::string& command) {
    if (command == "decompose") {
        if (!cfg.decompose) {
            throw ConfigError("decompose: missing config section");
        }
        require_file(resolve(cfg, cfg.decompose->input), "decompose input");
    } else if (command == "denoise") {
        if (!cfg.denoise_stage) {
            throw ConfigError("denoise: missing config section");
        }
        require_file(resolve(cfg, cfg.denoise_stage->input), "denoise input");
        if (!cfg.denoise_stage->reference.empty()) {
            require_file(resolve(cfg, cfg.denoise_stage->reference), "denoise reference");
        }
    } else if (command == "prep") {
        require_file(artifact(cfg, "corpus.jsonl"), "corpus");
        require_file(resolve(cfg, cfg.textprep.profiles_dir), "profiles directory");
    } else if (command == "train-embeddings") {
        require_file(artifact(cfg, "tokens.jsonl"), "token file");
        require_file(artifact(cfg, "vocab.json"), "vocabulary");
    } else if (command == "train-wesma") {
        require_file(artifact(cfg, "tokens.jsonl"), "token file");
        require_file(artifact(cfg, "vocab.json"), "vocabulary");
        require_file(artifact(cfg, "embeddings.csv"), "embeddings");
    } else if (command == "score") {
        require_file(artifact(cfg, "tokens.jsonl"), "token file");
        require_file(artifact(cfg, "vocab.json"), "vocabulary");
        require_file(artifact(cfg, "embeddings.csv"), "embeddings");
        require_file(artifact(cfg, "wesma_model.json"), "model");
    } else if (command == "evaluate") {
        require_file(artifact(cfg, "scores.csv"), "scores");
    } else if (command == "report") {
        require_file(cfg.out_dir, "output directory");
    } else if (command != "gen-data" && command != "eval-denoise") {
        throw ConfigError("unknown command: " + command);
    }
}

std::string run_command(const std::string& command, const RunConfig& cfg) {
    validate_for_command(cfg, command);
    if (command == "gen-data") {
        return cmd_gen_data(cfg);
    }
    if (command == "decompose") {
        return cmd_decompose(cfg);
    }
    if (command == "denoise") {
        return cmd_denoise(cfg);
    }
    if (command == "eval-denoise") {
        return cmd_eval_denoise(cfg);
    }
    if (command == "prep") {
        return cmd_prep(cfg);
    }
    if (command == "train-embeddings") {
        return cmd_train_embeddings(cfg);
    }
    if (command == "train-wesma") {
        return cmd_train_wesma(cfg);
    }
    if (command == "score") {
        return cmd_score(cfg);
    }
    if (command == "evaluate") {
        return cmd_evaluate(cfg);
    }
    if (command == "report") {
        return cmd_report(cfg);
    }
    throw ConfigError("unknown command: " + command);
}

} // namespace wesma
