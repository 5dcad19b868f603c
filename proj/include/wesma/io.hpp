#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wesma/autoencoder.hpp"
#include "wesma/denoise.hpp"
#include "wesma/embed.hpp"
#include "wesma/evalkit.hpp"
#include "wesma/textprep.hpp"
#include "wesma/wavelet.hpp"

namespace wesma {

// A file that failed to parse or carries inconsistent content; the CLI maps
// this to its data-error exit status.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All writers go through a temp file + rename so partial runs never leave a
// truncated artifact behind.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

std::string format_double(double v); // shortest round-trip decimal

// Signals: one sample per line, '.' radix, no header.
void write_signal_csv(const std::filesystem::path& path, const Signal& x);
Signal read_signal_csv(const std::filesystem::path& path);

// Decompositions: header level,index,value; detail levels 1..J then an
// "approx" pseudo-level.
void write_decomposition_csv(const std::filesystem::path& path, const UwtDecomposition& dec);

// Corpora: JSONL with keys id, lang, text and optional label.
void write_corpus_jsonl(const std::filesystem::path& path,
                        const std::vector<RawDocument>& docs);
std::vector<RawDocument> read_corpus_jsonl(const std::filesystem::path& path);

// Profiles: {"lang":..., "stopwords":[...], "suffix_rules":[["ing",3],...]}.
LanguageProfile profile_from_json(const nlohmann::json& j);
nlohmann::json profile_to_json(const LanguageProfile& profile);
LanguageProfile read_profile(const std::filesystem::path& path);

// Embeddings: header token,v0,...,v{d-1}; input vectors only.
void write_embeddings_csv(const std::filesystem::path& path, const Vocabulary& vocab,
                          const EmbeddingMatrix& embeddings);
std::pair<std::vector<std::string>, EmbeddingMatrix>
read_embeddings_csv(const std::filesystem::path& path);

nlohmann::json denoise_report_to_json(const DenoiseReport& report);

nlohmann::json metrics_to_json(const MetricsReport& report);

nlohmann::json model_to_json(const WesmaModel& model);
WesmaModel model_from_json(const nlohmann::json& j);

nlohmann::json scaler_to_json(const FeatureScaler& scaler);
FeatureScaler scaler_from_json(const nlohmann::json& j);

// Curves: header x,y,threshold.
void write_curve_csv(const std::filesystem::path& path, const std::vector<CurvePoint>& points);

// Grid tables: one column per parameter plus objective (empty on failure).
void write_grid_csv(const std::filesystem::path& path, const std::vector<GridParam>& grid,
                    const GridResult& result);

nlohmann::json parse_json_file(const std::filesystem::path& path);

} // namespace wesma
