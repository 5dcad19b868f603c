#include "wesma/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace wesma {

namespace fs = std::filesystem;
using nlohmann::json;

void atomic_write_text(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot open for writing: " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw DataError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw DataError("rename failed: " + path.string() + " (" + ec.message() + ")");
    }
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v) {
    // Shortest decimal that parses back to the same bits; at most 17
    // significant digits.
    char buf[40];
    for (int precision : {15, 16, 17}) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) {
            break;
        }
    }
    return buf;
}

void write_signal_csv(const fs::path& path, const Signal& x) {
    std::string out;
    out.reserve(x.size() * 12);
    for (double v : x) {
        out += format_double(v);
        out.push_back('\n');
    }
    atomic_write_text(path, out);
}

Signal read_signal_csv(const fs::path& path) {
    std::istringstream in(read_text(path));
    Signal x;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(line.c_str(), &end);
        if (end == line.c_str() || errno != 0 || !std::isfinite(v)) {
            throw DataError(path.string() + ": bad sample at line " +
                            std::to_string(line_no));
        }
        x.push_back(v);
    }
    if (x.empty()) {
        throw DataError(path.string() + ": empty signal");
    }
    return x;
}

void write_decomposition_csv(const fs::path& path, const UwtDecomposition& dec) {
    std::string out = "level,index,value\n";
    for (std::size_t j = 0; j < dec.details.size(); ++j) {
        for (std::size_t i = 0; i < dec.details[j].size(); ++i) {
            out += std::to_string(j + 1);
            out.push_back(',');
            out += std::to_string(i);
            out.push_back(',');
            out += format_double(dec.details[j][i]);
            out.push_back('\n');
        }
    }
    for (std::size_t i = 0; i < dec.approx.size(); ++i) {
        out += "approx,";
        out += std::to_string(i);
        out.push_back(',');
        out += format_double(dec.approx[i]);
        out.push_back('\n');
    }
    atomic_write_text(path, out);
}

void write_corpus_jsonl(const fs::path& path, const std::vector<RawDocument>& docs) {
    std::string out;
    for (const RawDocument& doc : docs) {
        json j{{"id", doc.id}, {"lang", doc.lang}, {"text", doc.text}};
        if (doc.label) {
            j["label"] = to_string(*doc.label);
        }
        out += j.dump();
        out.push_back('\n');
    }
    atomic_write_text(path, out);
}

std::vector<RawDocument> read_corpus_jsonl(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::vector<RawDocument> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        RawDocument doc;
        try {
            doc.id = j.at("id").get<std::string>();
            doc.lang = j.at("lang").get<std::string>();
            doc.text = j.at("text").get<std::string>();
            if (j.contains("label")) {
                doc.label = label_from_string(j.at("label").get<std::string>());
            }
        } catch (const std::exception& e) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (doc.id.empty() || doc.lang.empty()) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": id and lang must be nonempty");
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

LanguageProfile profile_from_json(const json& j) {
    LanguageProfile profile;
    profile.lang = j.at("lang").get<std::string>();
    for (const auto& word : j.at("stopwords")) {
        profile.stopwords.insert(word.get<std::string>());
    }
    for (const auto& rule : j.at("suffix_rules")) {
        if (!rule.is_array() || rule.size() != 2) {
            throw DataError("suffix rule must be a [suffix, min_stem_len] pair");
        }
        SuffixRule r;
        r.suffix = rule[0].get<std::string>();
        const long long min_len = rule[1].get<long long>();
        if (r.suffix.empty() || min_len < 1) {
            throw DataError("suffix rules need a nonempty suffix and min_stem_len >= 1");
        }
        r.min_stem_len = static_cast<std::size_t>(min_len);
        profile.suffix_rules.push_back(std::move(r));
    }
    return profile;
}

nlohmann::json profile_to_json(const LanguageProfile& profile) {
    json rules = json::array();
    for (const SuffixRule& r : profile.suffix_rules) {
        rules.push_back(json::array({r.suffix, r.min_stem_len}));
    }
    return json{{"lang", profile.lang},
                {"stopwords", std::vector<std::string>(profile.stopwords.begin(),
                                                       profile.stopwords.end())},
                {"suffix_rules", rules}};
}

LanguageProfile read_profile(const fs::path& path) {
    try {
        return profile_from_json(parse_json_file(path));
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_embeddings_csv(const fs::path& path, const Vocabulary& vocab,
                          const EmbeddingMatrix& embeddings) {
    if (vocab.size() != embeddings.vocab_size) {
        throw std::invalid_argument("vocabulary and embeddings disagree");
    }
    std::string out = "token";
    for (std::size_t k = 0; k < embeddings.dim; ++k) {
        out += ",v" + std::to_string(k);
    }
    out.push_back('\n');
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        out += vocab.tokens[i];
        const auto vec = embeddings.input_vector(i);
        for (double v : vec) {
            out.push_back(',');
            out += format_double(v);
        }
        out.push_back('\n');
    }
    atomic_write_text(path, out);
}

std::pair<std::vector<std::string>, EmbeddingMatrix>
read_embeddings_csv(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line) || line.rfind("token", 0) != 0) {
        throw DataError(path.string() + ": missing embeddings header");
    }
    std::vector<std::string> tokens;
    std::vector<double> values;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::stringstream row(line);
        std::string cell;
        if (!std::getline(row, cell, ',')) {
            throw DataError(path.string() + ": bad row");
        }
        tokens.push_back(cell);
        std::size_t count = 0;
        while (std::getline(row, cell, ',')) {
            values.push_back(std::strtod(cell.c_str(), nullptr));
            ++count;
        }
        if (dim == 0) {
            dim = count;
        } else if (count != dim) {
            throw DataError(path.string() + ": ragged embedding row");
        }
    }
    if (tokens.empty() || dim == 0) {
        throw DataError(path.string() + ": empty embeddings");
    }
    EmbeddingMatrix e;
    e.vocab_size = tokens.size();
    e.dim = dim;
    e.input_vectors = std::move(values);
    e.output_vectors.assign(e.vocab_size * e.dim, 0.0);
    return {std::move(tokens), std::move(e)};
}

namespace {

json optional_db(const std::optional<double>& v) {
    if (!v) {
        return "unavailable";
    }
    if (std::isinf(*v)) {
        return "infinite";
    }
    return *v;
}

} // namespace

json denoise_report_to_json(const DenoiseReport& report) {
    return json{{"sigma_used", report.sigma_used},
                {"threshold_used", report.threshold_used},
                {"input_snr_db", optional_db(report.input_snr_db)},
                {"output_snr_db", optional_db(report.output_snr_db)},
                {"improvement_db", optional_db(report.improvement_db)}};
}

json metrics_to_json(const MetricsReport& report) {
    return json{{"accuracy", report.accuracy}, {"precision", report.precision},
                {"recall", report.recall},     {"f1", report.f1},
                {"fpr", report.fpr},           {"fnr", report.fnr},
                {"auc", report.auc}};
}

json model_to_json(const WesmaModel& model) {
    json layers = json::array();
    for (const MdaLayer& layer : model.layers) {
        layers.push_back(json{{"rows", layer.weights.rows},
                              {"cols", layer.weights.cols},
                              {"lambda", layer.lambda},
                              {"weights", layer.weights.data}});
    }
    return json{{"repr_mode", to_string(model.repr_mode)},
                {"keep_prob", model.profile.keep_prob},
                {"nonlinearity", "tanh"},
                {"layers", layers}};
}

WesmaModel model_from_json(const json& j) {
    WesmaModel model;
    model.repr_mode = repr_mode_from_string(j.at("repr_mode").get<std::string>());
    model.profile.keep_prob = j.at("keep_prob").get<std::vector<double>>();
    for (const auto& layer_json : j.at("layers")) {
        MdaLayer layer;
        layer.lambda = layer_json.at("lambda").get<double>();
        layer.weights.rows = layer_json.at("rows").get<std::size_t>();
        layer.weights.cols = layer_json.at("cols").get<std::size_t>();
        layer.weights.data = layer_json.at("weights").get<std::vector<double>>();
        if (layer.weights.data.size() != layer.weights.rows * layer.weights.cols) {
            throw DataError("layer weight count does not match its shape");
        }
        model.layers.push_back(std::move(layer));
    }
    if (model.layers.empty()) {
        throw DataError("model has no layers");
    }
    return model;
}

json scaler_to_json(const FeatureScaler& scaler) {
    return json{{"kept", scaler.kept}, {"mean", scaler.mean}, {"stdev", scaler.stdev}};
}

FeatureScaler scaler_from_json(const json& j) {
    FeatureScaler scaler;
    scaler.kept = j.at("kept").get<std::vector<std::size_t>>();
    scaler.mean = j.at("mean").get<std::vector<double>>();
    scaler.stdev = j.at("stdev").get<std::vector<double>>();
    if (scaler.kept.size() != scaler.mean.size() || scaler.mean.size() != scaler.stdev.size()) {
        throw DataError("scaler fields disagree in length");
    }
    return scaler;
}

void write_curve_csv(const fs::path& path, const std::vector<CurvePoint>& points) {
    std::string out = "x,y,threshold\n";
    for (const CurvePoint& p : points) {
        out += format_double(p.x);
        out.push_back(',');
        out += format_double(p.y);
        out.push_back(',');
        if (std::isinf(p.threshold)) {
            out += p.threshold > 0 ? "inf" : "-inf";
        } else {
            out += format_double(p.threshold);
        }
        out.push_back('\n');
    }
    atomic_write_text(path, out);
}

void write_grid_csv(const fs::path& path, const std::vector<GridParam>& grid,
                    const GridResult& result) {
    std::string out;
    for (const GridParam& param : grid) {
        out += param.name;
        out.push_back(',');
    }
    out += "objective\n";
    for (const GridCell& cell : result.table) {
        for (const GridParam& param : grid) {
            const json& value = cell.params.at(param.name);
            out += value.is_string() ? value.get<std::string>() : value.dump();
            out.push_back(',');
        }
        if (cell.objective) {
            out += format_double(*cell.objective);
        }
        out.push_back('\n');
    }
    atomic_write_text(path, out);
}

json parse_json_file(const fs::path& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

} // namespace wesma
