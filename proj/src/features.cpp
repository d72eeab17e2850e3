#include "cialab/features.hpp"

#include <algorithm>
#include <fstream>

#include "cialab/errors.hpp"

namespace cialab {

WindowMatrix make_windows(const CaptureSet& capture, int window, int stride) {
    if (window < 2) throw InvalidArgumentError("window size must be >= 2");
    if (stride < 1 || stride > window)
        throw InvalidArgumentError("stride must be in 1..window");
    const std::size_t n = capture.records.size();
    const auto w = static_cast<std::size_t>(window);
    if (n < w) throw InsufficientDataError(w, n);

    WindowMatrix wm;
    wm.window = window;
    wm.stride = stride;
    wm.rows = (n - w) / static_cast<std::size_t>(stride) + 1;
    wm.data.reserve(wm.rows * w);
    wm.raw_labels.reserve(wm.rows * w);
    wm.labels.reserve(wm.rows);

    for (std::size_t r = 0; r < wm.rows; ++r) {
        const std::size_t base = r * static_cast<std::size_t>(stride);
        double label_sum = 0;
        for (std::size_t k = 0; k < w; ++k) {
            const Packet& p = capture.records[base + k];
            wm.data.push_back(static_cast<double>(p.length));
            wm.raw_labels.push_back(p.label);
            label_sum += p.label;
        }
        wm.labels.push_back(label_sum / static_cast<double>(w));
    }
    return wm;
}

WindowMatrix concat_windows(WindowMatrix a, const WindowMatrix& b) {
    if (a.rows == 0) return b;
    if (b.rows == 0) return a;
    if (a.window != b.window)
        throw ShapeError("window size mismatch: " + std::to_string(a.window) + " vs " +
                         std::to_string(b.window));
    if (a.scale != b.scale)
        throw InvalidArgumentError("cannot concatenate differently scaled matrices");
    a.rows += b.rows;
    a.data.insert(a.data.end(), b.data.begin(), b.data.end());
    a.raw_labels.insert(a.raw_labels.end(), b.raw_labels.begin(), b.raw_labels.end());
    a.labels.insert(a.labels.end(), b.labels.begin(), b.labels.end());
    return a;
}

WindowMatrix normalize(const WindowMatrix& wm) {
    if (wm.data.empty()) throw InvalidArgumentError("empty window matrix");
    auto [lo, hi] = std::minmax_element(wm.data.begin(), wm.data.end());
    if (*hi == *lo)
        throw DegenerateScaleError("all lengths equal (" + std::to_string(*lo) +
                                   "), cannot min-max scale");
    return normalize_with(wm, ScaleParams{*lo, *hi});
}

WindowMatrix normalize_with(const WindowMatrix& wm, ScaleParams scale) {
    if (!(scale.max > scale.min))
        throw DegenerateScaleError("scale max must exceed min");
    WindowMatrix out = wm;
    const double span = scale.max - scale.min;
    for (double& v : out.data) {
        v = (v - scale.min) / span;
        if (v < 0) v = 0;
        if (v > 1) v = 1;
    }
    out.scale = scale;
    return out;
}

std::vector<std::uint8_t> binarized_labels(const WindowMatrix& wm) {
    std::vector<std::uint8_t> out(wm.rows);
    for (std::size_t i = 0; i < wm.rows; ++i) out[i] = wm.labels[i] >= 0.5 ? 1 : 0;
    return out;
}

std::uint64_t BigramHistogram::total() const {
    std::uint64_t t = 0;
    for (const auto& [key, count] : counts) t += count;
    return t;
}

void accumulate_bigrams(BigramHistogram& hist, const CaptureSet& capture) {
    if (capture.records.size() < 2)
        throw InsufficientDataError(2, capture.records.size());
    for (std::size_t i = 0; i + 1 < capture.records.size(); ++i)
        ++hist.counts[{capture.records[i].length, capture.records[i + 1].length}];
}

BigramHistogram bigram_histogram(const CaptureSet& capture) {
    BigramHistogram hist;
    accumulate_bigrams(hist, capture);
    return hist;
}

void write_bigram_csv(const BigramHistogram& hist, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot open for writing");
    out << "len_a,len_b,count\n";
    for (const auto& [key, count] : hist.counts)
        out << key.first << ',' << key.second << ',' << count << '\n';
    out.flush();
    if (!out) throw IoError(path, "write failed");
}

}  // namespace cialab
