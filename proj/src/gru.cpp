#include "cialab/gru.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <utility>

#include "cialab/errors.hpp"
#include "cialab/rng.hpp"

namespace cialab {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// max(x,0) + log1p(exp(-|x|)): stable softplus for the BCE-from-logit form.
double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

// One cell step. rh is an H-sized scratch for r * h_prev.
void step_kernel(const GruParams& p, const double* h_prev, double x, double* r,
                 double* z, double* c, double* h_next, double* rh) {
    const int h = p.hidden;
    for (int i = 0; i < h; ++i) {
        const double* wri = p.w_r.data() + static_cast<std::size_t>(i) * (h + 1);
        const double* wzi = p.w_z.data() + static_cast<std::size_t>(i) * (h + 1);
        double ar = p.b_r[i];
        double az = p.b_z[i];
        for (int j = 0; j < h; ++j) {
            ar += wri[j] * h_prev[j];
            az += wzi[j] * h_prev[j];
        }
        ar += wri[h] * x;
        az += wzi[h] * x;
        r[i] = sigmoid(ar);
        z[i] = sigmoid(az);
    }
    for (int j = 0; j < h; ++j) rh[j] = r[j] * h_prev[j];
    for (int i = 0; i < h; ++i) {
        const double* wci = p.w_c.data() + static_cast<std::size_t>(i) * (h + 1);
        double ac = p.b_c[i];
        for (int j = 0; j < h; ++j) ac += wci[j] * rh[j];
        ac += wci[h] * x;
        c[i] = std::tanh(ac);
        h_next[i] = z[i] * h_prev[i] + (1.0 - z[i]) * c[i];
    }
}

double forward_logit(const GruParams& p, std::span<const double> window, GruWorkspace& ws) {
    const int h = p.hidden;
    const std::size_t t_len = window.size();
    ws.h.assign((t_len + 1) * h, 0.0);
    ws.r.resize(t_len * h);
    ws.z.resize(t_len * h);
    ws.c.resize(t_len * h);
    ws.drh.resize(h);
    for (std::size_t t = 0; t < t_len; ++t) {
        step_kernel(p, &ws.h[t * h], window[t], &ws.r[t * h], &ws.z[t * h], &ws.c[t * h],
                    &ws.h[(t + 1) * h], ws.drh.data());
    }
    double logit = p.b_out;
    const double* h_last = &ws.h[t_len * h];
    for (int i = 0; i < h; ++i) logit += p.w_out[i] * h_last[i];
    return logit;
}

// BPTT over the caches left by forward_logit. Accumulates into g.
void backward_pass(const GruParams& p, std::span<const double> window, GruWorkspace& ws,
                   double dlogit, GruParams& g) {
    const int h = p.hidden;
    const std::size_t t_len = window.size();
    ws.dh.resize(h);
    ws.dh_prev.resize(h);
    ws.da.resize(h);
    ws.drh.resize(h);
    double* dh = ws.dh.data();
    double* dhp = ws.dh_prev.data();
    double* da = ws.da.data();
    double* drh = ws.drh.data();

    const double* h_last = &ws.h[t_len * h];
    g.b_out += dlogit;
    for (int i = 0; i < h; ++i) {
        g.w_out[i] += dlogit * h_last[i];
        dh[i] = dlogit * p.w_out[i];
    }

    for (std::size_t t = t_len; t-- > 0;) {
        const double* h_prev = &ws.h[t * h];
        const double* r = &ws.r[t * h];
        const double* z = &ws.z[t * h];
        const double* c = &ws.c[t * h];
        const double x = window[t];

        for (int i = 0; i < h; ++i) dhp[i] = dh[i] * z[i];

        // candidate: dc = dh*(1-z), da = dc*(1-c^2); drh collects W^T da
        for (int i = 0; i < h; ++i) {
            const double dc = dh[i] * (1.0 - z[i]);
            da[i] = dc * (1.0 - c[i] * c[i]);
        }
        std::fill(drh, drh + h, 0.0);
        for (int i = 0; i < h; ++i) {
            const double* wci = p.w_c.data() + static_cast<std::size_t>(i) * (h + 1);
            double* gwci = g.w_c.data() + static_cast<std::size_t>(i) * (h + 1);
            const double dai = da[i];
            g.b_c[i] += dai;
            for (int j = 0; j < h; ++j) {
                gwci[j] += dai * (r[j] * h_prev[j]);
                drh[j] += wci[j] * dai;
            }
            gwci[h] += dai * x;
        }
        for (int j = 0; j < h; ++j) dhp[j] += drh[j] * r[j];

        // update gate: dz = dh*(h_prev - c)
        for (int i = 0; i < h; ++i) {
            const double dz = dh[i] * (h_prev[i] - c[i]);
            da[i] = dz * z[i] * (1.0 - z[i]);
        }
        for (int i = 0; i < h; ++i) {
            const double* wzi = p.w_z.data() + static_cast<std::size_t>(i) * (h + 1);
            double* gwzi = g.w_z.data() + static_cast<std::size_t>(i) * (h + 1);
            const double dai = da[i];
            g.b_z[i] += dai;
            for (int j = 0; j < h; ++j) {
                gwzi[j] += dai * h_prev[j];
                dhp[j] += wzi[j] * dai;
            }
            gwzi[h] += dai * x;
        }

        // reset gate: dr = (W^T da_c)*h_prev
        for (int i = 0; i < h; ++i) {
            const double dr = drh[i] * h_prev[i];
            da[i] = dr * r[i] * (1.0 - r[i]);
        }
        for (int i = 0; i < h; ++i) {
            const double* wri = p.w_r.data() + static_cast<std::size_t>(i) * (h + 1);
            double* gwri = g.w_r.data() + static_cast<std::size_t>(i) * (h + 1);
            const double dai = da[i];
            g.b_r[i] += dai;
            for (int j = 0; j < h; ++j) {
                gwri[j] += dai * h_prev[j];
                dhp[j] += wri[j] * dai;
            }
            gwri[h] += dai * x;
        }
        std::swap(dh, dhp);
    }
}

void check_finite_window(std::span<const double> window) {
    if (window.empty()) throw InvalidArgumentError("forward: empty window");
    for (double x : window) {
        if (!std::isfinite(x)) throw NumericError("forward: non-finite input");
    }
}

void add_params(GruParams& dst, const GruParams& src) {
    auto d = dst.tensors();
    auto s = src.tensors();
    for (std::size_t k = 0; k < d.size(); ++k) {
        const std::size_t n = d[k].rows * d[k].cols;
        for (std::size_t i = 0; i < n; ++i) d[k].data[i] += s[k].data[i];
    }
}

// Static block partition; each worker owns a contiguous block range.
void run_parallel(std::size_t jobs, int threads, const std::function<void(std::size_t, int)>& body) {
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(jobs)));
    if (workers == 1) {
        for (std::size_t i = 0; i < jobs; ++i) body(i, 0);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t begin = jobs * w / workers;
            const std::size_t end = jobs * (w + 1) / workers;
            try {
                for (std::size_t i = begin; i < end; ++i) body(i, w);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Rows summed per fixed-size block, blocks summed in index order, so the
// reduction is identical for every thread count.
constexpr std::size_t kGradBlock = 16;

}  // namespace

GruParams GruParams::zeros(int hidden) {
    if (hidden < 1) throw InvalidArgumentError("hidden size must be >= 1");
    GruParams p;
    p.hidden = hidden;
    const std::size_t mat = static_cast<std::size_t>(hidden) * (hidden + 1);
    p.w_r.assign(mat, 0.0);
    p.w_z.assign(mat, 0.0);
    p.w_c.assign(mat, 0.0);
    p.b_r.assign(hidden, 0.0);
    p.b_z.assign(hidden, 0.0);
    p.b_c.assign(hidden, 0.0);
    p.w_out.assign(hidden, 0.0);
    p.b_out = 0.0;
    return p;
}

void GruParams::validate_shapes() const {
    if (hidden < 1) throw ShapeError("params: hidden size must be >= 1");
    const std::size_t mat = static_cast<std::size_t>(hidden) * (hidden + 1);
    const std::size_t vec = static_cast<std::size_t>(hidden);
    if (w_r.size() != mat || w_z.size() != mat || w_c.size() != mat ||
        b_r.size() != vec || b_z.size() != vec || b_c.size() != vec || w_out.size() != vec) {
        throw ShapeError("params: tensor sizes inconsistent with hidden size");
    }
}

std::size_t GruParams::parameter_count() const {
    return 3 * w_r.size() + 3 * b_r.size() + w_out.size() + 1;
}

std::array<GruParams::TensorView, 8> GruParams::tensors() {
    const std::size_t h = static_cast<std::size_t>(hidden);
    return {{{"W_r", w_r.data(), h, h + 1},
             {"b_r", b_r.data(), 1, h},
             {"W_z", w_z.data(), h, h + 1},
             {"b_z", b_z.data(), 1, h},
             {"W", w_c.data(), h, h + 1},
             {"b", b_c.data(), 1, h},
             {"w_out", w_out.data(), 1, h},
             {"b_out", &b_out, 1, 1}}};
}

std::array<GruParams::ConstTensorView, 8> GruParams::tensors() const {
    const std::size_t h = static_cast<std::size_t>(hidden);
    return {{{"W_r", w_r.data(), h, h + 1},
             {"b_r", b_r.data(), 1, h},
             {"W_z", w_z.data(), h, h + 1},
             {"b_z", b_z.data(), 1, h},
             {"W", w_c.data(), h, h + 1},
             {"b", b_c.data(), 1, h},
             {"w_out", w_out.data(), 1, h},
             {"b_out", &b_out, 1, 1}}};
}

GruParams init_params(int hidden, std::uint64_t seed) {
    GruParams p = GruParams::zeros(hidden);
    Rng rng(seed);
    const double k = 1.0 / std::sqrt(static_cast<double>(hidden) + 1.0);
    for (auto& view : p.tensors()) {
        const std::size_t n = view.rows * view.cols;
        for (std::size_t i = 0; i < n; ++i) view.data[i] = (rng.uniform() * 2.0 - 1.0) * k;
    }
    return p;
}

CellStep cell_step(const GruParams& params, std::span<const double> h_prev, double x) {
    params.validate_shapes();
    if (h_prev.size() != static_cast<std::size_t>(params.hidden)) {
        throw ShapeError("cell_step: h_prev size does not match hidden size");
    }
    if (!std::isfinite(x)) throw NumericError("cell_step: non-finite input x");
    for (double v : h_prev) {
        if (!std::isfinite(v)) throw NumericError("cell_step: non-finite state input");
    }
    const int h = params.hidden;
    CellStep out;
    out.h_next.resize(h);
    out.r.resize(h);
    out.z.resize(h);
    out.c.resize(h);
    std::vector<double> rh(h);
    step_kernel(params, h_prev.data(), x, out.r.data(), out.z.data(), out.c.data(),
                out.h_next.data(), rh.data());
    return out;
}

ForwardResult forward(const GruParams& params, std::span<const double> window,
                      GruWorkspace& ws) {
    params.validate_shapes();
    check_finite_window(window);
    const double logit = forward_logit(params, window, ws);
    return {sigmoid(logit), logit};
}

ForwardResult forward(const GruParams& params, std::span<const double> window) {
    GruWorkspace ws;
    return forward(params, window, ws);
}

double loss_and_gradients(const GruParams& params, const WindowMatrix& data,
                          std::span<const std::size_t> indices, GruParams& grads,
                          int threads) {
    params.validate_shapes();
    if (indices.empty()) throw InvalidArgumentError("loss_and_gradients: empty batch");
    for (std::size_t idx : indices) {
        if (idx >= data.rows) throw InvalidArgumentError("loss_and_gradients: row index out of range");
        const double y = data.labels[idx];
        if (!(y >= 0.0 && y <= 1.0)) {
            throw InvalidArgumentError("loss_and_gradients: target outside [0,1]");
        }
    }

    const std::size_t n = indices.size();
    const double inv = 1.0 / static_cast<double>(n);
    const std::size_t blocks = (n + kGradBlock - 1) / kGradBlock;
    std::vector<GruParams> partial(blocks, GruParams::zeros(params.hidden));
    std::vector<double> block_loss(blocks, 0.0);

    const int workers = std::max(1, threads);
    std::vector<GruWorkspace> ws(workers);
    run_parallel(blocks, workers, [&](std::size_t b, int worker) {
        GruWorkspace& w = ws[worker];
        const std::size_t lo = b * kGradBlock;
        const std::size_t hi = std::min(n, lo + kGradBlock);
        for (std::size_t e = lo; e < hi; ++e) {
            const std::size_t idx = indices[e];
            const auto window = data.row(idx);
            check_finite_window(window);
            const double logit = forward_logit(params, window, w);
            const double y = data.labels[idx];
            block_loss[b] += softplus(logit) - y * logit;
            backward_pass(params, window, w, (sigmoid(logit) - y) * inv, partial[b]);
        }
    });

    grads = GruParams::zeros(params.hidden);
    double loss = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        loss += block_loss[b];
        add_params(grads, partial[b]);
    }
    return loss * inv;
}

std::vector<double> score_rows(const GruParams& params, const WindowMatrix& data,
                               int threads) {
    params.validate_shapes();
    std::vector<double> scores(data.rows, 0.0);
    const int workers = std::max(1, threads);
    std::vector<GruWorkspace> ws(workers);
    run_parallel(data.rows, workers, [&](std::size_t i, int worker) {
        const auto window = data.row(i);
        check_finite_window(window);
        scores[i] = sigmoid(forward_logit(params, window, ws[worker]));
    });
    return scores;
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ValidationError("train: learning rate must be positive and finite");
    }
    if (batch_size < 1) throw ValidationError("train: batch size must be >= 1");
    if (epochs < 0) throw ValidationError("train: epochs must be >= 0");
    if (hidden < 1) throw ValidationError("train: hidden size must be >= 1");
    if (!(grad_clip >= 0.0)) throw ValidationError("train: gradient clip must be >= 0");
    if (optimizer != "adam" && optimizer != "sgd") {
        throw ValidationError("train: optimizer must be 'adam' or 'sgd'");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw ValidationError("train: betas must lie in [0,1)");
    }
    if (!(eps > 0.0)) throw ValidationError("train: eps must be positive");
    if (threads < 0) throw ValidationError("train: threads must be >= 0");
}

int TrainConfig::effective_threads() const {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

double global_norm(const GruParams& g) {
    double sum = 0.0;
    for (const auto& view : g.tensors()) {
        const std::size_t n = view.rows * view.cols;
        for (std::size_t i = 0; i < n; ++i) sum += view.data[i] * view.data[i];
    }
    return std::sqrt(sum);
}

void scale_params(GruParams& g, double s) {
    for (auto& view : g.tensors()) {
        const std::size_t n = view.rows * view.cols;
        for (std::size_t i = 0; i < n; ++i) view.data[i] *= s;
    }
}

struct AdamState {
    GruParams m, v;
    long step = 0;
};

void apply_update(GruParams& p, const GruParams& g, const TrainConfig& cfg, AdamState& adam) {
    auto pv = p.tensors();
    auto gv = g.tensors();
    if (cfg.optimizer == "sgd") {
        for (std::size_t k = 0; k < pv.size(); ++k) {
            const std::size_t n = pv[k].rows * pv[k].cols;
            for (std::size_t i = 0; i < n; ++i) pv[k].data[i] -= cfg.learning_rate * gv[k].data[i];
        }
        return;
    }
    adam.step += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(adam.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(adam.step));
    auto mv = adam.m.tensors();
    auto vv = adam.v.tensors();
    for (std::size_t k = 0; k < pv.size(); ++k) {
        const std::size_t n = pv[k].rows * pv[k].cols;
        for (std::size_t i = 0; i < n; ++i) {
            const double grad = gv[k].data[i];
            double& m = mv[k].data[i];
            double& v = vv[k].data[i];
            m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
            v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad * grad;
            pv[k].data[i] -= cfg.learning_rate * (m / bc1) / (std::sqrt(v / bc2) + cfg.eps);
        }
    }
}

// Mean stable BCE and 0.5-threshold accuracy of params on a whole matrix.
std::pair<double, double> eval_split(const GruParams& p, const WindowMatrix& data,
                                     int threads) {
    const std::vector<double> scores = score_rows(p, data, threads);
    double loss = 0.0;
    std::size_t correct = 0;
    GruWorkspace ws;
    for (std::size_t i = 0; i < data.rows; ++i) {
        const double logit = forward_logit(p, data.row(i), ws);
        const double y = data.labels[i];
        loss += softplus(logit) - y * logit;
        const bool predicted = scores[i] >= 0.5;
        const bool truth = y >= 0.5;
        if (predicted == truth) ++correct;
    }
    return {loss / static_cast<double>(data.rows),
            static_cast<double>(correct) / static_cast<double>(data.rows)};
}

}  // namespace

TrainResult train(const GruParams& initial, const WindowMatrix& data,
                  const TrainConfig& config, const WindowMatrix* validation) {
    config.validate();
    initial.validate_shapes();
    if (initial.hidden != config.hidden) {
        throw InvalidArgumentError("train: initial params hidden size differs from config");
    }
    if (data.rows == 0) throw InsufficientDataError(1, 0);
    for (std::size_t i = 0; i < data.rows; ++i) {
        const double y = data.labels[i];
        if (!(y >= 0.0 && y <= 1.0)) {
            throw InvalidArgumentError("train: target outside [0,1]");
        }
    }
    if (validation != nullptr && validation->rows == 0) validation = nullptr;

    TrainResult result;
    result.params = initial;
    result.history.reserve(config.epochs);

    const int threads = config.effective_threads();
    AdamState adam{GruParams::zeros(config.hidden), GruParams::zeros(config.hidden), 0};
    GruParams grads = GruParams::zeros(config.hidden);
    Rng rng(config.seed);
    std::vector<std::size_t> order(data.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t count = std::min<std::size_t>(config.batch_size, order.size() - start);
            const std::span<const std::size_t> batch(order.data() + start, count);
            const double batch_loss = loss_and_gradients(result.params, data, batch, grads, threads);
            if (!std::isfinite(batch_loss)) throw TrainingDivergedError(epoch);
            epoch_loss += batch_loss * static_cast<double>(count);
            if (config.grad_clip > 0.0) {
                const double norm = global_norm(grads);
                if (!(norm <= config.grad_clip)) scale_params(grads, config.grad_clip / norm);
            }
            apply_update(result.params, grads, config, adam);
        }
        EpochStats stats;
        stats.epoch = epoch;
        stats.loss = epoch_loss / static_cast<double>(data.rows);
        if (!std::isfinite(stats.loss)) throw TrainingDivergedError(epoch);
        if (validation != nullptr) {
            const auto [val_loss, val_acc] = eval_split(result.params, *validation, threads);
            stats.val_loss = val_loss;
            stats.val_accuracy = val_acc;
        }
        result.history.push_back(stats);
    }
    return result;
}

namespace {

void write_tensor(std::FILE* f, const char* name, const double* data, std::size_t rows,
                  std::size_t cols, const std::string& path) {
    if (std::fprintf(f, "tensor %s %zu %zu\n", name, rows, cols) < 0) throw IoError(path);
    char buf[40];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", data[r * cols + c]);
            if (std::fprintf(f, c == 0 ? "%s" : " %s", buf) < 0) throw IoError(path);
        }
        if (std::fputc('\n', f) == EOF) throw IoError(path);
    }
}

struct ModelReader {
    std::istream& in;
    const std::string& path;
    std::size_t lineno = 0;
    std::string line;

    bool next() {
        if (!std::getline(in, line)) return false;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++lineno;
        return true;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ModelFormatError(path + ":" + std::to_string(lineno) + ": " + what);
    }

    void expect_tensor(const char* name, double* data, std::size_t rows, std::size_t cols) {
        if (!next()) fail(std::string("missing tensor block '") + name + "'");
        std::istringstream head(line);
        std::string kw, got;
        std::size_t r = 0, c = 0;
        if (!(head >> kw >> got >> r >> c) || kw != "tensor") fail("expected a tensor header");
        if (got != name) fail("expected tensor '" + std::string(name) + "', found '" + got + "'");
        if (r != rows || c != cols) {
            fail("tensor '" + got + "' has shape " + std::to_string(r) + "x" + std::to_string(c) +
                 ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
        }
        for (std::size_t i = 0; i < rows; ++i) {
            if (!next()) fail("truncated tensor '" + std::string(name) + "'");
            const char* cur = line.c_str();
            const char* end = cur + line.size();
            for (std::size_t j = 0; j < cols; ++j) {
                while (cur < end && *cur == ' ') ++cur;
                double value = 0;
                const auto [ptr, ec] = std::from_chars(cur, end, value);
                if (ec != std::errc{}) fail("bad value in tensor '" + std::string(name) + "'");
                data[i * cols + j] = value;
                cur = ptr;
            }
            while (cur < end && *cur == ' ') ++cur;
            if (cur != end) fail("extra values in tensor '" + std::string(name) + "'");
        }
    }
};

}  // namespace

void save_model(const GruModel& model, const std::string& path) {
    model.params.validate_shapes();
    if (model.window_size < 1) throw InvalidArgumentError("save_model: window size must be >= 1");
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (f == nullptr) throw IoError(path);
    try {
        if (std::fprintf(f, "%s\nH=%d\nW=%d\n", kModelFormatTag, model.params.hidden,
                         model.window_size) < 0) {
            throw IoError(path);
        }
        for (const auto& view : model.params.tensors()) {
            write_tensor(f, view.name, view.data, view.rows, view.cols, path);
        }
        write_tensor(f, "norm_min", &model.scale.min, 1, 1, path);
        write_tensor(f, "norm_max", &model.scale.max, 1, 1, path);
    } catch (...) {
        std::fclose(f);
        throw;
    }
    if (std::fclose(f) != 0) throw IoError(path);
}

GruModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path);
    ModelReader reader{in, path};

    if (!reader.next()) reader.fail("empty file");
    if (reader.line != kModelFormatTag) {
        reader.fail("unsupported format tag '" + reader.line + "'");
    }
    auto read_int = [&](const char* key) {
        if (!reader.next()) reader.fail(std::string("missing ") + key + "= line");
        const std::string prefix = std::string(key) + "=";
        if (reader.line.rfind(prefix, 0) != 0) reader.fail(std::string("expected ") + key + "= line");
        int value = 0;
        const char* b = reader.line.c_str() + prefix.size();
        const char* e = reader.line.c_str() + reader.line.size();
        const auto [ptr, ec] = std::from_chars(b, e, value);
        if (ec != std::errc{} || ptr != e || value < 1) {
            reader.fail(std::string("bad ") + key + " value");
        }
        return value;
    };
    const int hidden = read_int("H");
    const int window = read_int("W");

    GruModel model;
    model.params = GruParams::zeros(hidden);
    model.window_size = window;
    for (auto& view : model.params.tensors()) {
        reader.expect_tensor(view.name, view.data, view.rows, view.cols);
    }
    reader.expect_tensor("norm_min", &model.scale.min, 1, 1);
    reader.expect_tensor("norm_max", &model.scale.max, 1, 1);
    if (reader.next()) reader.fail("trailing content after the last tensor");
    if (!(model.scale.min < model.scale.max)) reader.fail("degenerate normalization range");
    for (const auto& view : std::as_const(model.params).tensors()) {
        const std::size_t n = view.rows * view.cols;
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(view.data[i])) reader.fail("non-finite parameter value");
        }
    }
    return model;
}

}  // namespace cialab
