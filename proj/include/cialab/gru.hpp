#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cialab/features.hpp"

namespace cialab {

/**
 * All trainable state of the detector. The three recurrent weight
 * matrices act on the concatenation [h_prev, x] (x is the scalar packet
 * length), so each is hidden x (hidden+1), stored row-major. w_out/b_out
 * are the sigmoid output head.
 */
struct GruParams {
    int hidden = 0;
    std::vector<double> w_r, w_z, w_c;  // hidden x (hidden+1)
    std::vector<double> b_r, b_z, b_c;  // hidden
    std::vector<double> w_out;          // hidden
    double b_out = 0;

    static GruParams zeros(int hidden);
    void validate_shapes() const;
    std::size_t parameter_count() const;

    struct TensorView {
        const char* name;
        double* data;
        std::size_t rows, cols;
    };
    struct ConstTensorView {
        const char* name;
        const double* data;
        std::size_t rows, cols;
    };
    // The eight tensors in model-file order. Views alias this object.
    std::array<TensorView, 8> tensors();
    std::array<ConstTensorView, 8> tensors() const;

    bool operator==(const GruParams&) const = default;
};

// Seeded uniform(-k, k) init with k = 1/sqrt(hidden+1).
GruParams init_params(int hidden, std::uint64_t seed);

// One gate evaluation:
//   r = sigmoid(W_r [h_prev, x] + b_r)
//   z = sigmoid(W_z [h_prev, x] + b_z)
//   c = tanh(W [r * h_prev, x] + b)
//   h_next = z * h_prev + (1 - z) * c        (z gates the old state)
struct CellStep {
    std::vector<double> h_next, r, z, c;
};
CellStep cell_step(const GruParams& params, std::span<const double> h_prev, double x);

// Reusable per-sequence scratch. Holds the forward caches backward needs.
struct GruWorkspace {
    std::vector<double> h;        // (T+1) x hidden, h[0] = 0
    std::vector<double> r, z, c;  // T x hidden
    std::vector<double> dh, dh_prev, da, drh;
};

struct ForwardResult {
    double score = 0;  // sigmoid(logit)
    double logit = 0;
};

/**
 * Run the cell over one window of normalized lengths from h_0 = 0 and
 * apply the output head. The workspace keeps the caches needed for a
 * subsequent backward pass over the same window.
 */
ForwardResult forward(const GruParams& params, std::span<const double> window,
                      GruWorkspace& ws);

// Convenience overload with a throwaway workspace.
ForwardResult forward(const GruParams& params, std::span<const double> window);

/**
 * Mean binary cross-entropy of the selected rows and its gradient with
 * respect to every parameter, by backpropagation through time. Targets
 * (the window label means) must lie in [0,1]. The reduction over rows is
 * a fixed-order sum, so the result does not depend on thread count.
 */
double loss_and_gradients(const GruParams& params, const WindowMatrix& data,
                          std::span<const std::size_t> indices, GruParams& grads,
                          int threads = 1);

// Scores for every row of the matrix. Deterministic for any thread count.
std::vector<double> score_rows(const GruParams& params, const WindowMatrix& data,
                               int threads = 1);

struct TrainConfig {
    double learning_rate = 1e-3;
    int batch_size = 64;
    int epochs = 10;
    int hidden = 32;
    double grad_clip = 5.0;    // global norm; 0 disables
    std::uint64_t seed = 0;
    std::string optimizer = "adam";  // "adam" or "sgd"
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
    int effective_threads() const;
};

struct EpochStats {
    int epoch = 0;  // 1-based
    double loss = 0;
    std::optional<double> val_loss;
    std::optional<double> val_accuracy;

    bool operator==(const EpochStats&) const = default;
};

struct TrainResult {
    GruParams params;
    std::vector<EpochStats> history;
};

/**
 * Mini-batch training with a per-epoch seeded shuffle. Deterministic given
 * the config seed. A non-finite epoch loss raises TrainingDivergedError.
 * `validation`, when given, adds per-epoch loss/accuracy on that split.
 */
TrainResult train(const GruParams& initial, const WindowMatrix& data,
                  const TrainConfig& config, const WindowMatrix* validation = nullptr);

/**
 * A trained model bundled with what inference needs: the window size it
 * was trained for and the training-split scaling parameters.
 */
struct GruModel {
    GruParams params;
    int window_size = 0;
    ScaleParams scale;

    bool operator==(const GruModel&) const = default;
};

inline constexpr const char* kModelFormatTag = "cia-gru v1";

// Line-oriented text format: the tag line, H=, W=, then one named tensor
// block per parameter (plus norm_min / norm_max) at full double precision.
void save_model(const GruModel& model, const std::string& path);
GruModel load_model(const std::string& path);

}  // namespace cialab
