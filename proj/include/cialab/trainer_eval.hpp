#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cialab/capture.hpp"
#include "cialab/features.hpp"
#include "cialab/gru.hpp"

namespace cialab {

struct RocPoint {
    double threshold = 0;  // +inf for the (0,0) anchor
    double fpr = 0;
    double tpr = 0;

    bool operator==(const RocPoint&) const = default;
};

struct EvalReport {
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0, f1 = 0;
    double fpr = 0, fnr = 0, tpr = 0, tnr = 0;
    double auc = 0;
    std::vector<RocPoint> roc_points;  // descending threshold, (0,0) .. (1,1)
    double inference_time_per_window = 0;  // seconds; filled by the driver
    std::string warning;                   // empty when nothing is degenerate
};

struct SplitResult {
    WindowMatrix train;
    WindowMatrix test;
    std::string warning;  // stratification problems; empty when both sides have both classes
};

/**
 * Window-level shuffled split. The train side gets floor(rows * fraction)
 * windows. Deterministic for a given seed. A side missing one of the
 * classes only sets the warning; callers decide whether that is fatal.
 */
SplitResult split(const WindowMatrix& dataset, double train_fraction, std::uint64_t seed);

/**
 * Confusion matrix at the threshold (prediction = score >= threshold),
 * derived ratios, and trapezoidal AUC over the ROC built from every
 * distinct score. Ratios with a zero denominator are reported as 0.
 * Single-class truth degenerates to AUC 0.5 with a warning.
 */
EvalReport evaluate(std::span<const double> scores, std::span<const std::uint8_t> truth,
                    double threshold = 0.5);

struct SweepRow {
    int window = 0;
    double accuracy = 0, f1 = 0, auc = 0;
    double train_s = 0;
    double infer_ms_per_window = 0;
};

struct ExperimentConfig {
    std::vector<int> window_sizes;  // sorted ascending by the driver
    int stride = 0;                 // 0 = non-overlapping (stride = window)
    double train_fraction = 0.8;
    std::uint64_t split_seed = 0;
    TrainConfig train;
    double threshold = 0.5;
};

struct ExperimentResult {
    std::vector<SweepRow> rows;
    EvalReport last_report;  // report for the largest window size
    std::vector<RocPoint> last_roc;
};

/**
 * The full per-size pipeline: featurize both captures, split, min-max
 * normalize on the train side, train, score the test side (timed), and
 * evaluate. Retrains from scratch for every window size. Errors from any
 * stage are re-thrown with the window size annotated.
 */
ExperimentResult run_experiment(const CaptureSet& benign, const CaptureSet& attack,
                                const ExperimentConfig& config);

// "window,accuracy,f1,auc,train_s,infer_ms_per_window" preceded by a
// comment line flagging the timing columns as non-deterministic.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

// "threshold,fpr,tpr", one row per ROC point, descending threshold.
void write_roc_csv(std::span<const RocPoint> points, const std::string& path);

// Flat JSON object of the scalar EvalReport fields.
void write_report_json(const EvalReport& report, double threshold, const std::string& path);

}  // namespace cialab
