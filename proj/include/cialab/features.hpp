#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cialab/capture.hpp"

namespace cialab {

// Min-max scaling parameters, computed on the training split only.
struct ScaleParams {
    double min = 0;
    double max = 1;

    bool operator==(const ScaleParams&) const = default;
};

/**
 * Windowed model input: n rows of `window` packet lengths each, the
 * matching per-packet label rows and the per-window label (the arithmetic
 * mean of the row's packet labels). `scale` is set once the matrix has
 * been normalized.
 */
struct WindowMatrix {
    int window = 0;
    int stride = 0;
    std::size_t rows = 0;
    std::vector<double> data;             // rows x window, row-major
    std::vector<std::uint8_t> raw_labels; // rows x window
    std::vector<double> labels;           // rows, each in [0,1]
    std::optional<ScaleParams> scale;

    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * static_cast<std::size_t>(window),
                static_cast<std::size_t>(window)};
    }
};

/**
 * Cut the capture's length sequence into windows of size W starting at
 * offsets 0, stride, 2*stride, ...; the trailing remainder is dropped.
 * stride == W gives the non-overlapping reshape. Window label = mean of
 * the packet labels in the window.
 */
WindowMatrix make_windows(const CaptureSet& capture, int window, int stride);

// Row-wise concatenation. Windows never span capture boundaries, so
// multi-capture datasets are built per capture and then joined here.
WindowMatrix concat_windows(WindowMatrix a, const WindowMatrix& b);

/**
 * Min-max scale to [0,1] using the matrix's own extrema (training split).
 * Raises DegenerateScaleError when all values are equal.
 */
WindowMatrix normalize(const WindowMatrix& wm);

// Apply existing scale parameters (test split); values outside the
// training range clip to [0,1].
WindowMatrix normalize_with(const WindowMatrix& wm, ScaleParams scale);

// Per-window ground truth: label mean binarized at >= 0.5.
std::vector<std::uint8_t> binarized_labels(const WindowMatrix& wm);

/**
 * Counts of adjacent packet-length pairs, the heatmap feature. Total
 * count equals (record count - 1) per contributing capture.
 */
struct BigramHistogram {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> counts;

    std::uint64_t total() const;
    std::size_t distinct() const { return counts.size(); }
};

BigramHistogram bigram_histogram(const CaptureSet& capture);

// Accumulate another capture into an existing histogram (merge is
// associative, so sharded accumulation is fine).
void accumulate_bigrams(BigramHistogram& hist, const CaptureSet& capture);

// CSV export, header "len_a,len_b,count", sorted by (len_a, len_b).
void write_bigram_csv(const BigramHistogram& hist, const std::string& path);

}  // namespace cialab
