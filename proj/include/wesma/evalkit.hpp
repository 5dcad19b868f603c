#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "wesma/textprep.hpp"

namespace wesma {

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;
    std::array<double, 3> ratios{};
};

// Seeded Fisher-Yates shuffle then contiguous slices; floor allocation with
// the remainder going to train.
Split split_dataset(std::size_t n, std::array<double, 3> ratios, std::uint64_t seed);

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
};

// Predict threat iff score > threshold (strict).
ConfusionCounts confusion(std::span<const double> scores, std::span<const Label> labels,
                          double threshold);

struct MetricsReport {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double fpr = 0.0;
    double fnr = 0.0;
    double auc = 0.0;
};

// Degenerate denominators map to 0 so sweeps never abort.
MetricsReport metrics(const ConfusionCounts& counts, double auc);

double f1_score(const ConfusionCounts& counts);

// Mann-Whitney statistic: ties count one half. Throws "AUC undefined" on
// single-class input.
double roc_auc(std::span<const double> scores, std::span<const Label> labels);

enum class CurveKind { roc, pr };

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
    double threshold = 0.0;
};

// Thresholds at each distinct score (descending) plus +/-inf sentinels.
// roc points are (fpr, tpr); pr points are (recall, precision).
std::vector<CurvePoint> curve_points(std::span<const double> scores,
                                     std::span<const Label> labels, CurveKind kind);

double trapezoid_area(const std::vector<CurvePoint>& points);

// Candidates are midpoints between consecutive distinct scores plus the
// +/-inf sentinels; ties resolve to the smallest threshold. Default
// objective is F1.
double select_threshold(std::span<const double> scores, std::span<const Label> labels,
                        const std::function<double(const ConfusionCounts&)>& objective = {});

struct GridParam {
    std::string name;
    std::vector<nlohmann::json> values;
};

struct GridCell {
    std::map<std::string, nlohmann::json> params;
    std::optional<double> objective; // empty when the evaluation failed
    std::string error;
};

struct GridResult {
    std::map<std::string, nlohmann::json> best_params;
    double best_objective = 0.0;
    std::vector<GridCell> table;
};

// Exhaustive Cartesian sweep, maximizing eval_fn; ties go to the earliest
// cell in parameter-then-value order. Failing cells are recorded and
// skipped.
GridResult grid_search(
    const std::vector<GridParam>& grid,
    const std::function<double(const std::map<std::string, nlohmann::json>&)>& eval_fn);

} // namespace wesma
