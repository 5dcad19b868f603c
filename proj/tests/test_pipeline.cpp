#include <doctest.h>

#include <filesystem>
#include <unistd.h>
#include <fstream>

#include "wesma/errors.hpp"
#include "wesma/io.hpp"
#include "wesma/pipeline.hpp"
#include "wesma/rng.hpp"

using namespace wesma;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("wesma-pipe-" + std::to_string(Rng(::getpid() + 1).next_u64() % 1000000));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

json tiny_pipeline_json(const fs::path& root) {
    json j;
    j["seed"] = 9;
    j["out_dir"] = (root / "out").string();
    j["datagen"]["signal"] = {{"kinds", {"blocks"}}, {"length", 512}, {"target_snr_db", 10.5}};
    j["datagen"]["corpus"] = {
        {"languages",
         json::array({{{"lang", "en"}, {"vocab_size", 60}, {"doc_count", 60}},
                      {{"lang", "hi"}, {"vocab_size", 60}, {"doc_count", 60}}})},
        {"doc_length_mean", 20},
        {"typo_rate", 0.05},
        {"threat_rate", 0.15}};
    j["decompose"] = {{"input", (root / "out/signals/blocks.csv").string()},
                      {"filter", "db2"},
                      {"levels", 3}};
    j["denoise"] = {{"input", (root / "out/signals/blocks_noisy.csv").string()},
                    {"reference", (root / "out/signals/blocks.csv").string()},
                    {"filter", "haar"},
                    {"levels", 5},
                    {"rule", "soft"}};
    j["eval_denoise"] = {
        {"languages", json::array({{{"lang", "en"}, {"initial_snr_db", 10.5}}})},
        {"signal", "blocks"},
        {"length", 512},
        {"seeds", 3},
        {"filter", "haar"},
        {"levels", 5},
        {"rule", "soft"}};
    j["textprep"] = {{"profiles_dir", "profiles"}, {"min_count", 2}};
    j["embed"] = {{"dim", 16}, {"window", 3}, {"negatives", 4},
                  {"learning_rate", 0.05}, {"epochs", 3}};
    j["wesma"] = {{"layers", 1}, {"lambda", 1e-3}, {"p0", 0.3}, {"alpha", 1.0},
                  {"p_max", 0.9}, {"repr_mode", "concat"}, {"auto_seed_count", 8},
                  {"fusion", true},
                  {"signal", {{"projections", 2}, {"target_length", 32}, {"levels", 3},
                              {"filter", "haar"}}}};
    j["eval"] = {{"ratios", {0.6, 0.2, 0.2}}};
    return j;
}

} // namespace

TEST_SUITE("pipeline") {

TEST_CASE("unknown config keys are rejected at every level") {
    json j;
    j["seed"] = 1;
    j["bogus"] = true;
    CHECK_THROWS_AS(run_config_from_json(j), ConfigError);

    json nested;
    nested["wesma"] = {{"layers", 1}, {"mystery", 2}};
    CHECK_THROWS_AS(run_config_from_json(nested), ConfigError);

    json deep;
    deep["datagen"]["signal"] = {{"length", 512}, {"shape", "square"}};
    CHECK_THROWS_AS(run_config_from_json(deep), ConfigError);
}

TEST_CASE("config values are range-checked") {
    json j;
    j["wesma"] = {{"p0", 1.5}};
    CHECK_THROWS_AS(run_config_from_json(j), ConfigError);

    json ratios;
    ratios["eval"] = {{"ratios", {0.5, 0.2, 0.2}}};
    CHECK_THROWS_AS(run_config_from_json(ratios), ConfigError);

    json rule;
    rule["denoise"] = {{"input", "x.csv"}, {"rule", "fuzzy"}};
    CHECK_THROWS_AS(run_config_from_json(rule), ConfigError);

    json target;
    target["datagen"]["signal"] = {{"target_snr_db", "clean"}};
    const RunConfig cfg = run_config_from_json(target);
    CHECK_FALSE(cfg.signal_gen.target_snr_db.has_value());
}

TEST_CASE("defaults survive an empty config") {
    const RunConfig cfg = run_config_from_json(json::object());
    CHECK(cfg.seed == 1);
    CHECK(cfg.out_dir == "out");
    CHECK(cfg.cbow.dim == 32);
    CHECK(cfg.wesma.fusion);
    CHECK(cfg.eval.ratios[0] == 0.6);
}

TEST_CASE("missing inputs surface as config errors") {
    RunConfig cfg = run_config_from_json(json::object());
    cfg.out_dir = "definitely-missing-dir-xyz";
    CHECK_THROWS_AS(validate_for_command(cfg, "prep"), ConfigError);
    CHECK_THROWS_AS(validate_for_command(cfg, "score"), ConfigError);
    CHECK_THROWS_AS(run_command("decompose", cfg), ConfigError);
    CHECK_THROWS_AS(validate_for_command(cfg, "no-such-command"), ConfigError);
}

TEST_CASE("full pipeline runs end to end on a tiny corpus") {
    TempDir tmp;
    const RunConfig cfg = run_config_from_json(tiny_pipeline_json(tmp.path));
    REQUIRE(fs::exists("profiles/en.json")); // run from the repo root

    run_command("gen-data", cfg);
    CHECK(fs::exists(tmp.path / "out/signals/blocks.csv"));
    CHECK(fs::exists(tmp.path / "out/signals/blocks_noisy.csv"));
    CHECK(fs::exists(tmp.path / "out/corpus.jsonl"));

    run_command("decompose", cfg);
    CHECK(fs::exists(tmp.path / "out/decomposition.csv"));

    run_command("denoise", cfg);
    CHECK(fs::exists(tmp.path / "out/denoised.csv"));
    const json report = parse_json_file(tmp.path / "out/denoise_report.json");
    CHECK(report.at("improvement_db").is_number());
    CHECK(report.at("improvement_db").get<double>() > 0.0);

    run_command("eval-denoise", cfg);
    const std::string table = read_text(tmp.path / "out/denoise_table.csv");
    CHECK(table.rfind("language,signal,initial_snr_db,improved_snr_db,improvement_db\n",
                      0) == 0);

    run_command("prep", cfg);
    run_command("train-embeddings", cfg);
    run_command("train-wesma", cfg);
    run_command("score", cfg);
    const std::string summary = run_command("evaluate", cfg);
    CHECK(summary.find("auc=") != std::string::npos);

    const json metrics = parse_json_file(tmp.path / "out/metrics.json");
    for (const char* key : {"accuracy", "precision", "recall", "f1", "fpr", "fnr", "auc"}) {
        REQUIRE(metrics.contains(key));
        const double v = metrics.at(key).get<double>();
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }

    run_command("report", cfg);
    CHECK(fs::exists(tmp.path / "out/report/roc.svg"));
    CHECK(fs::exists(tmp.path / "out/report/pr.svg"));
    CHECK(fs::exists(tmp.path / "out/report/waveforms.svg"));

    // The model file round-trips byte-exactly through its own serialization.
    const json model = parse_json_file(tmp.path / "out/wesma_model.json");
    const WesmaModel docvec = model_from_json(model.at("docvec_model"));
    CHECK(model_to_json(docvec).dump(2) == model.at("docvec_model").dump(2));
}

TEST_CASE("identical configs and seeds produce byte-identical artifacts") {
    TempDir tmp;
    json j = tiny_pipeline_json(tmp.path);
    j["datagen"].erase("signal");

    auto run_into = [&](const std::string& name) {
        json local = j;
        local["out_dir"] = (tmp.path / name).string();
        const RunConfig cfg = run_config_from_json(local);
        run_command("gen-data", cfg);
        run_command("prep", cfg);
        run_command("train-embeddings", cfg);
        run_command("train-wesma", cfg);
        run_command("score", cfg);
        run_command("evaluate", cfg);
    };
    run_into("a");
    run_into("b");
    for (const char* artifact :
         {"corpus.jsonl", "tokens.jsonl", "vocab.json", "embeddings.csv",
          "wesma_model.json", "scores.csv", "metrics.json", "roc.csv", "pr.csv"}) {
        CHECK(read_text(tmp.path / "a" / artifact) == read_text(tmp.path / "b" / artifact));
    }
}

TEST_CASE("manual zero threshold reproduces the input through the cli path") {
    TempDir tmp;
    json j = tiny_pipeline_json(tmp.path);
    j["denoise"]["threshold"] = 0.0;
    const RunConfig cfg = run_config_from_json(j);
    run_command("gen-data", cfg);
    run_command("denoise", cfg);
    const Signal in = read_signal_csv(tmp.path / "out/signals/blocks_noisy.csv");
    const Signal out = read_signal_csv(tmp.path / "out/denoised.csv");
    REQUIRE(in.size() == out.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        CHECK(std::fabs(in[i] - out[i]) < 1e-8);
    }
}

} // TEST_SUITE
