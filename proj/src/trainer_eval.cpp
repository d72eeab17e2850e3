#include "cialab/trainer_eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cialab/errors.hpp"
#include "cialab/rng.hpp"

#include "json.hpp"

namespace cialab {

namespace {

WindowMatrix gather_rows(const WindowMatrix& src, std::span<const std::size_t> indices) {
    WindowMatrix out;
    out.window = src.window;
    out.stride = src.stride;
    out.scale = src.scale;
    const auto w = static_cast<std::size_t>(src.window);
    out.rows = indices.size();
    out.data.reserve(indices.size() * w);
    out.labels.reserve(indices.size());
    out.raw_labels.reserve(indices.size() * w);
    for (std::size_t idx : indices) {
        const auto row = src.row(idx);
        out.data.insert(out.data.end(), row.begin(), row.end());
        out.labels.push_back(src.labels[idx]);
        out.raw_labels.insert(out.raw_labels.end(), src.raw_labels.begin() + idx * w,
                              src.raw_labels.begin() + (idx + 1) * w);
    }
    return out;
}

bool has_class(const WindowMatrix& wm, bool positive) {
    for (double y : wm.labels) {
        if ((y >= 0.5) == positive) return true;
    }
    return false;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

SplitResult split(const WindowMatrix& dataset, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InvalidArgumentError("split: train fraction must lie in (0,1)");
    }
    if (dataset.rows == 0) throw InsufficientDataError(1, 0);

    std::vector<std::size_t> order(dataset.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);

    const auto train_n =
        static_cast<std::size_t>(std::floor(static_cast<double>(dataset.rows) * train_fraction));
    std::vector<std::size_t> train_idx(order.begin(), order.begin() + train_n);
    std::vector<std::size_t> test_idx(order.begin() + train_n, order.end());
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());

    SplitResult result;
    result.train = gather_rows(dataset, train_idx);
    result.test = gather_rows(dataset, test_idx);

    std::string warning;
    if (result.train.rows == 0) {
        warning = "train split is empty";
    } else if (result.test.rows == 0) {
        warning = "test split is empty";
    } else {
        const bool both_classes = has_class(dataset, false) && has_class(dataset, true);
        if (both_classes) {
            for (const auto* side : {&result.train, &result.test}) {
                const char* name = side == &result.train ? "train" : "test";
                if (!has_class(*side, true)) {
                    warning = std::string("stratification: ") + name + " split has no positive windows";
                } else if (!has_class(*side, false)) {
                    warning = std::string("stratification: ") + name + " split has no negative windows";
                }
            }
        }
    }
    result.warning = warning;
    return result;
}

EvalReport evaluate(std::span<const double> scores, std::span<const std::uint8_t> truth,
                    double threshold) {
    if (scores.size() != truth.size()) {
        throw ShapeError("evaluate: scores and truth have different lengths");
    }
    if (scores.empty()) throw InsufficientDataError(1, 0);
    for (double s : scores) {
        if (!std::isfinite(s)) throw NumericError("evaluate: non-finite score");
    }
    for (std::uint8_t t : truth) {
        if (t > 1) throw InvalidArgumentError("evaluate: truth values must be 0 or 1");
    }

    EvalReport report;
    const std::size_t n = scores.size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool predicted = scores[i] >= threshold;
        const bool actual = truth[i] == 1;
        if (actual) {
            predicted ? ++report.tp : ++report.fn;
        } else {
            predicted ? ++report.fp : ++report.tn;
        }
    }

    const double pos = static_cast<double>(report.tp + report.fn);
    const double neg = static_cast<double>(report.fp + report.tn);
    report.accuracy = static_cast<double>(report.tp + report.tn) / static_cast<double>(n);
    report.tpr = pos > 0 ? static_cast<double>(report.tp) / pos : 0.0;
    report.fpr = neg > 0 ? static_cast<double>(report.fp) / neg : 0.0;
    // Complements are derived, not re-divided, so tnr == 1-fpr holds exactly.
    report.fnr = pos > 0 ? 1.0 - report.tpr : 0.0;
    report.tnr = neg > 0 ? 1.0 - report.fpr : 0.0;
    const double prec_den = static_cast<double>(report.tp + report.fp);
    const double precision = prec_den > 0 ? static_cast<double>(report.tp) / prec_den : 0.0;
    const double recall = report.tpr;
    report.f1 = (precision + recall) > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;

    if (pos == 0 || neg == 0) {
        report.auc = 0.5;
        report.roc_points = {{std::numeric_limits<double>::infinity(), 0.0, 0.0},
                             {-std::numeric_limits<double>::infinity(), 1.0, 1.0}};
        report.warning = "single-class truth: AUC is undefined, reported as 0.5";
        return report;
    }

    // ROC over every distinct score, descending; trapezoidal area.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    report.roc_points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    double auc = 0.0;
    double prev_fpr = 0.0, prev_tpr = 0.0;
    std::uint64_t tp_cum = 0, fp_cum = 0;
    std::size_t i = 0;
    while (i < n) {
        const double cut = scores[order[i]];
        while (i < n && scores[order[i]] == cut) {
            truth[order[i]] == 1 ? ++tp_cum : ++fp_cum;
            ++i;
        }
        const double cur_tpr = static_cast<double>(tp_cum) / pos;
        const double cur_fpr = static_cast<double>(fp_cum) / neg;
        auc += (cur_fpr - prev_fpr) * (cur_tpr + prev_tpr) * 0.5;
        report.roc_points.push_back({cut, cur_fpr, cur_tpr});
        prev_fpr = cur_fpr;
        prev_tpr = cur_tpr;
    }
    report.auc = auc;
    return report;
}

ExperimentResult run_experiment(const CaptureSet& benign, const CaptureSet& attack,
                                const ExperimentConfig& config) {
    if (config.window_sizes.empty()) {
        throw InvalidArgumentError("run_experiment: empty window size list");
    }
    std::vector<int> sizes = config.window_sizes;
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    ExperimentResult result;
    for (int w : sizes) {
        try {
            const int stride = config.stride == 0 ? w : config.stride;
            WindowMatrix windows =
                concat_windows(make_windows(benign, w, stride), make_windows(attack, w, stride));

            SplitResult parts = split(windows, config.train_fraction, config.split_seed);
            if (parts.train.rows == 0 || parts.test.rows == 0) {
                throw InsufficientDataError(2, parts.train.rows + parts.test.rows);
            }
            parts.train = normalize(parts.train);
            parts.test = normalize_with(parts.test, *parts.train.scale);

            TrainConfig tc = config.train;
            const auto train_start = std::chrono::steady_clock::now();
            TrainResult trained = train(init_params(tc.hidden, tc.seed), parts.train, tc);
            const double train_s = seconds_since(train_start);

            const auto infer_start = std::chrono::steady_clock::now();
            const std::vector<double> scores = score_rows(trained.params, parts.test, 1);
            const double infer_s = seconds_since(infer_start);

            const std::vector<std::uint8_t> truth = binarized_labels(parts.test);
            EvalReport report = evaluate(scores, truth, config.threshold);
            report.inference_time_per_window = infer_s / static_cast<double>(parts.test.rows);
            if (!parts.warning.empty()) {
                report.warning = report.warning.empty()
                                     ? parts.warning
                                     : report.warning + "; " + parts.warning;
            }

            SweepRow row;
            row.window = w;
            row.accuracy = report.accuracy;
            row.f1 = report.f1;
            row.auc = report.auc;
            row.train_s = train_s;
            row.infer_ms_per_window = report.inference_time_per_window * 1e3;
            result.rows.push_back(row);
            result.last_roc = report.roc_points;
            result.last_report = std::move(report);
        } catch (const std::exception& e) {
            throw Error("window " + std::to_string(w) + ": " + e.what());
        }
    }
    return result;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (f == nullptr) throw IoError(path);
    bool ok = std::fprintf(f, "# train_s and infer_ms_per_window are wall-clock and vary between runs\n"
                              "window,accuracy,f1,auc,train_s,infer_ms_per_window\n") >= 0;
    for (const SweepRow& r : rows) {
        if (!ok) break;
        ok = std::fprintf(f, "%d,%.6f,%.6f,%.6f,%.3f,%.6f\n", r.window, r.accuracy, r.f1, r.auc,
                          r.train_s, r.infer_ms_per_window) >= 0;
    }
    if (std::fclose(f) != 0 || !ok) throw IoError(path);
}

void write_roc_csv(std::span<const RocPoint> points, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (f == nullptr) throw IoError(path);
    bool ok = std::fprintf(f, "threshold,fpr,tpr\n") >= 0;
    for (const RocPoint& p : points) {
        if (!ok) break;
        ok = std::fprintf(f, "%.17g,%.17g,%.17g\n", p.threshold, p.fpr, p.tpr) >= 0;
    }
    if (std::fclose(f) != 0 || !ok) throw IoError(path);
}

void write_report_json(const EvalReport& report, double threshold, const std::string& path) {
    nlohmann::ordered_json j;
    j["threshold"] = threshold;
    j["tp"] = report.tp;
    j["fp"] = report.fp;
    j["tn"] = report.tn;
    j["fn"] = report.fn;
    j["accuracy"] = report.accuracy;
    j["f1"] = report.f1;
    j["fpr"] = report.fpr;
    j["fnr"] = report.fnr;
    j["tpr"] = report.tpr;
    j["tnr"] = report.tnr;
    j["auc"] = report.auc;
    j["inference_time_per_window_s"] = report.inference_time_per_window;
    j["warning"] = report.warning;

    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (f == nullptr) throw IoError(path);
    const std::string text = j.dump(2) + "\n";
    const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
    if (std::fclose(f) != 0 || !ok) throw IoError(path);
}

}  // namespace cialab
