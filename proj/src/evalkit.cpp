#include "wesma/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wesma/errors.hpp"
#include "wesma/rng.hpp"

namespace wesma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_scores_labels(std::span<const double> scores, std::span<const Label> labels) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("length mismatch");
    }
    std::size_t pos = 0;
    for (Label l : labels) {
        pos += (l == Label::threat) ? 1 : 0;
    }
    if (pos == 0 || pos == labels.size()) {
        throw NumericError("AUC undefined");
    }
}

std::vector<double> distinct_sorted_scores(std::span<const double> scores, bool descending) {
    std::vector<double> values(scores.begin(), scores.end());
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (descending) {
        std::reverse(values.begin(), values.end());
    }
    return values;
}

} // namespace

Split split_dataset(std::size_t n, std::array<double, 3> ratios, std::uint64_t seed) {
    double sum = 0.0;
    for (double r : ratios) {
        if (!(r > 0.0)) {
            throw std::invalid_argument("ratios must be positive");
        }
        sum += r;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("ratios must sum to 1");
    }
    if (n < 3) {
        throw std::invalid_argument("too few examples");
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    Rng rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(order[i], order[j]);
    }

    const std::size_t n_val = static_cast<std::size_t>(ratios[1] * static_cast<double>(n));
    const std::size_t n_test = static_cast<std::size_t>(ratios[2] * static_cast<double>(n));
    const std::size_t n_train = n - n_val - n_test; // floor remainders go to train

    Split split;
    split.seed = seed;
    split.ratios = ratios;
    split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                     order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val),
                      order.end());
    return split;
}

ConfusionCounts confusion(std::span<const double> scores, std::span<const Label> labels,
                          double threshold) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("length mismatch");
    }
    ConfusionCounts counts;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool predicted_threat = scores[i] > threshold;
        const bool is_threat = labels[i] == Label::threat;
        if (predicted_threat && is_threat) {
            ++counts.tp;
        } else if (predicted_threat && !is_threat) {
            ++counts.fp;
        } else if (!predicted_threat && is_threat) {
            ++counts.fn;
        } else {
            ++counts.tn;
        }
    }
    return counts;
}

MetricsReport metrics(const ConfusionCounts& counts, double auc) {
    const std::size_t total = counts.total();
    if (total == 0) {
        throw std::invalid_argument("no evaluated examples");
    }
    auto ratio = [](std::size_t num, std::size_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    MetricsReport report;
    report.accuracy = ratio(counts.tp + counts.tn, total);
    report.precision = ratio(counts.tp, counts.tp + counts.fp);
    report.recall = ratio(counts.tp, counts.tp + counts.fn);
    report.f1 = (report.precision + report.recall) > 0.0
                    ? 2.0 * report.precision * report.recall /
                          (report.precision + report.recall)
                    : 0.0;
    report.fpr = ratio(counts.fp, counts.fp + counts.tn);
    report.fnr = ratio(counts.fn, counts.fn + counts.tp);
    report.auc = auc;
    return report;
}

double f1_score(const ConfusionCounts& counts) {
    const double precision =
        (counts.tp + counts.fp) == 0
            ? 0.0
            : static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fp);
    const double recall =
        (counts.tp + counts.fn) == 0
            ? 0.0
            : static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
    return (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

double roc_auc(std::span<const double> scores, std::span<const Label> labels) {
    check_scores_labels(scores, labels);
    std::vector<std::pair<double, Label>> ranked(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        ranked[i] = {scores[i], labels[i]};
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // Walk groups of tied scores; each positive beats every negative strictly
    // below (weight 2) and ties against negatives in its own group (weight 1).
    double two_u = 0.0;
    double neg_below = 0.0;
    double n_pos = 0.0;
    double n_neg = 0.0;
    std::size_t i = 0;
    while (i < ranked.size()) {
        std::size_t j = i;
        double pos_group = 0.0;
        double neg_group = 0.0;
        while (j < ranked.size() && ranked[j].first == ranked[i].first) {
            if (ranked[j].second == Label::threat) {
                pos_group += 1.0;
            } else {
                neg_group += 1.0;
            }
            ++j;
        }
        two_u += pos_group * (2.0 * neg_below + neg_group);
        neg_below += neg_group;
        n_pos += pos_group;
        n_neg += neg_group;
        i = j;
    }
    return two_u / (2.0 * n_pos * n_neg);
}

std::vector<CurvePoint> curve_points(std::span<const double> scores,
                                     std::span<const Label> labels, CurveKind kind) {
    check_scores_labels(scores, labels);
    std::vector<double> thresholds{kInf};
    for (double s : distinct_sorted_scores(scores, true)) {
        thresholds.push_back(s);
    }
    thresholds.push_back(-kInf);

    std::vector<CurvePoint> points;
    points.reserve(thresholds.size());
    for (double t : thresholds) {
        const ConfusionCounts counts = confusion(scores, labels, t);
        CurvePoint point;
        point.threshold = t;
        if (kind == CurveKind::roc) {
            point.x = (counts.fp + counts.tn) == 0
                          ? 0.0
                          : static_cast<double>(counts.fp) /
                                static_cast<double>(counts.fp + counts.tn);
            point.y = (counts.tp + counts.fn) == 0
                          ? 0.0
                          : static_cast<double>(counts.tp) /
                                static_cast<double>(counts.tp + counts.fn);
        } else {
            const MetricsReport m = metrics(counts, 0.0);
            point.x = m.recall;
            point.y = m.precision;
        }
        points.push_back(point);
    }
    return points;
}

double trapezoid_area(const std::vector<CurvePoint>& points) {
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        area += (points[i].x - points[i - 1].x) * 0.5 * (points[i].y + points[i - 1].y);
    }
    return area;
}

double select_threshold(std::span<const double> scores, std::span<const Label> labels,
                        const std::function<double(const ConfusionCounts&)>& objective) {
    check_scores_labels(scores, labels);
    const auto score_of = objective ? objective : f1_score;

    std::vector<double> candidates{-kInf};
    const std::vector<double> distinct = distinct_sorted_scores(scores, false);
    for (std::size_t i = 1; i < distinct.size(); ++i) {
        candidates.push_back(0.5 * (distinct[i - 1] + distinct[i]));
    }
    candidates.push_back(kInf);

    double best_threshold = candidates.front();
    double best_value = -kInf;
    for (double t : candidates) {
        const double value = score_of(confusion(scores, labels, t));
        if (value > best_value || (value == best_value && t < best_threshold)) {
            best_value = value;
            best_threshold = t;
        }
    }
    return best_threshold;
}

GridResult grid_search(
    const std::vector<GridParam>& grid,
    const std::function<double(const std::map<std::string, nlohmann::json>&)>& eval_fn) {
    if (grid.empty()) {
        throw std::invalid_argument("empty grid");
    }
    for (const GridParam& param : grid) {
        if (param.values.empty()) {
            throw std::invalid_argument("grid parameter with no values: " + param.name);
        }
    }

    GridResult result;
    result.best_objective = -kInf;
    std::vector<std::size_t> cursor(grid.size(), 0);
    bool done = false;
    while (!done) {
        GridCell cell;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            cell.params[grid[i].name] = grid[i].values[cursor[i]];
        }
        try {
            const double value = eval_fn(cell.params);
            cell.objective = value;
            if (value > result.best_objective) {
                result.best_objective = value;
                result.best_params = cell.params;
            }
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
        result.table.push_back(std::move(cell));

        // Advance odometer-style; the last parameter varies fastest.
        std::size_t level = grid.size();
        while (level > 0) {
            --level;
            if (++cursor[level] < grid[level].values.size()) {
                break;
            }
            cursor[level] = 0;
            if (level == 0) {
                done = true;
            }
        }
    }
    if (result.best_params.empty() && result.best_objective == -kInf) {
        throw NumericError("every grid cell failed");
    }
    return result;
}

} // namespace wesma
