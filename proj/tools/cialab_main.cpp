#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cialab/camera_sim.hpp"
#include "cialab/capture_io.hpp"
#include "cialab/config.hpp"
#include "cialab/errors.hpp"
#include "cialab/features.hpp"
#include "cialab/gru.hpp"
#include "cialab/switch_sim.hpp"
#include "cialab/trainer_eval.hpp"

namespace {

namespace fs = std::filesystem;
using namespace cialab;

// Missing input files exit 2; validation/config problems exit 3.
constexpr int kExitMissingFile = 2;
constexpr int kExitValidation = 3;

struct MissingFileError : Error {
    explicit MissingFileError(const std::string& path) : Error("missing file: " + path) {}
};

void require_file(const std::string& path) {
    if (!fs::exists(path)) throw MissingFileError(path);
}

void ensure_parent_dir(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

std::string report_path(const RunConfig& config, const char* name) {
    fs::create_directories(config.report_dir);
    return (fs::path(config.report_dir) / name).string();
}

AttackPlan make_plan(const RunConfig& config, const CaptureSet& benign) {
    AttackPlan plan;
    plan.victim_dst = config.victim_dst();
    plan.attacker_port = config.attacker_port;
    plan.injected_profile = config.left;
    plan.start_s = config.attack_start_s;
    plan.end_s = config.attack_end_s == 0 ? static_cast<double>(benign.duration_s())
                                          : config.attack_end_s;
    return plan;
}

CaptureSet truncated(CaptureSet capture, std::uint64_t max_packets) {
    if (max_packets != 0 && capture.records.size() > max_packets) {
        capture.records.resize(max_packets);
    }
    return capture;
}

struct SplitData {
    WindowMatrix train;
    WindowMatrix test;
    std::string warning;
};

// The shared featurize -> split path of train and eval. Both splits come
// back un-normalized; callers apply the training scale.
SplitData windowed_split(const RunConfig& config, int window, int stride) {
    require_file(config.benign_csv);
    require_file(config.attack_csv);
    const CaptureSet benign = read_csv(config.benign_csv);
    const CaptureSet attack = read_csv(config.attack_csv);
    const int step = stride == 0 ? window : stride;
    WindowMatrix all =
        concat_windows(make_windows(benign, window, step), make_windows(attack, window, step));
    SplitResult parts = split(all, config.train_fraction, config.split_seed());
    return {std::move(parts.train), std::move(parts.test), std::move(parts.warning)};
}

int cmd_generate(const RunConfig& config) {
    StreamSpec spec;
    spec.duration_s = config.gen_duration_s;
    spec.profiles = {config.front};
    spec.rng_seed = config.gen_seed();
    const CaptureSet capture = generate_stream(spec);

    ensure_parent_dir(config.benign_csv);
    write_csv(capture, config.benign_csv);
    if (!config.benign_pcap.empty()) {
        ensure_parent_dir(config.benign_pcap);
        export_pcap(capture, config.benign_pcap);
    }
    std::uint64_t bytes = 0;
    for (const Packet& p : capture.records) bytes += p.length;
    std::printf("generate: %zu packets, %.1f s, %.2f MB -> %s\n", capture.records.size(),
                static_cast<double>(capture.duration_s()), static_cast<double>(bytes) / 1e6,
                config.benign_csv.c_str());
    return 0;
}

int cmd_attack(const RunConfig& config) {
    require_file(config.benign_csv);
    const CaptureSet benign = read_csv(config.benign_csv);
    const AttackPlan plan = make_plan(config, benign);

    ForwardingTable table;
    table = learn(table, plan.victim_dst, config.victim_port);
    table = learn(table, config.front.src, 1);
    std::printf("forwarding table before poisoning:\n%s", table_to_text(table).c_str());
    table = poison(table, plan);
    std::printf("forwarding table after poisoning:\n%s", table_to_text(table).c_str());

    const CaptureSet attacked = apply_interference(benign, plan, config.attack_seed());
    ensure_parent_dir(config.attack_csv);
    write_csv(attacked, config.attack_csv);
    if (!config.attack_pcap.empty()) {
        ensure_parent_dir(config.attack_pcap);
        export_pcap(attacked, config.attack_pcap);
    }
    const std::size_t injected = attacked.records.size() - benign.records.size();
    std::printf("attack: %zu packets (%zu injected) over [%.1f, %.1f) s -> %s\n",
                attacked.records.size(), injected, plan.start_s, plan.end_s,
                config.attack_csv.c_str());
    return 0;
}

int cmd_featurize(const RunConfig& config) {
    require_file(config.benign_csv);
    require_file(config.attack_csv);
    const CaptureSet benign = read_csv(config.benign_csv);
    const CaptureSet attack = read_csv(config.attack_csv);

    const BigramHistogram benign_grams = bigram_histogram(benign);
    const BigramHistogram attack_grams = bigram_histogram(attack);
    const std::string benign_path = report_path(config, "benign_bigrams.csv");
    const std::string attack_path = report_path(config, "attack_bigrams.csv");
    write_bigram_csv(benign_grams, benign_path);
    write_bigram_csv(attack_grams, attack_path);

    bool superset = true;
    for (const auto& [key, count] : benign_grams.counts) {
        if (attack_grams.counts.find(key) == attack_grams.counts.end()) {
            superset = false;
            break;
        }
    }
    const bool strict = superset && attack_grams.distinct() > benign_grams.distinct();
    std::printf("featurize: benign %zu distinct 2-grams, attack %zu; attack %s benign's key set\n",
                benign_grams.distinct(), attack_grams.distinct(),
                strict ? "strictly contains" : (superset ? "equals" : "does not contain"));
    std::printf("featurize: wrote %s and %s\n", benign_path.c_str(), attack_path.c_str());
    return 0;
}

int cmd_train(const RunConfig& config) {
    SplitData data = windowed_split(config, config.window, config.stride);
    if (!data.warning.empty()) std::printf("train: warning: %s\n", data.warning.c_str());
    data.train = normalize(data.train);
    const ScaleParams scale = *data.train.scale;
    data.test = normalize_with(data.test, scale);

    TrainConfig tc = config.train;
    tc.seed = config.train_seed();
    const TrainResult result = train(init_params(tc.hidden, tc.seed), data.train, tc, &data.test);

    ensure_parent_dir(config.model_path);
    save_model({result.params, config.window, scale}, config.model_path);

    const std::string history_path = report_path(config, "history.csv");
    std::FILE* f = std::fopen(history_path.c_str(), "wb");
    if (f == nullptr) throw IoError(history_path);
    std::fprintf(f, "epoch,loss,val_loss,val_accuracy\n");
    for (const EpochStats& e : result.history) {
        std::fprintf(f, "%d,%.9g,", e.epoch, e.loss);
        if (e.val_loss) std::fprintf(f, "%.9g", *e.val_loss);
        std::fputc(',', f);
        if (e.val_accuracy) std::fprintf(f, "%.9g", *e.val_accuracy);
        std::fputc('\n', f);
    }
    if (std::fclose(f) != 0) throw IoError(history_path);

    std::printf("train: %zu train / %zu val windows (W=%d)\n", data.train.rows, data.test.rows,
                config.window);
    for (const EpochStats& e : result.history) {
        std::printf("  epoch %d: loss %.6f", e.epoch, e.loss);
        if (e.val_loss) std::printf(", val loss %.6f", *e.val_loss);
        if (e.val_accuracy) std::printf(", val acc %.4f", *e.val_accuracy);
        std::printf("\n");
    }
    std::printf("train: model -> %s, history -> %s\n", config.model_path.c_str(),
                history_path.c_str());
    return 0;
}

int cmd_eval(const RunConfig& config) {
    require_file(config.model_path);
    const GruModel model = load_model(config.model_path);

    SplitData data = windowed_split(config, model.window_size, config.stride);
    data.test = normalize_with(data.test, model.scale);

    const auto start = std::chrono::steady_clock::now();
    const std::vector<double> scores = score_rows(model.params, data.test, 1);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    EvalReport report = evaluate(scores, binarized_labels(data.test), config.threshold);
    report.inference_time_per_window = elapsed / static_cast<double>(data.test.rows);
    if (!data.warning.empty()) {
        report.warning = report.warning.empty() ? data.warning
                                                : report.warning + "; " + data.warning;
    }

    const std::string report_file = report_path(config, "report.json");
    const std::string roc_file = report_path(config, "roc.csv");
    write_report_json(report, config.threshold, report_file);
    write_roc_csv(report.roc_points, roc_file);

    std::printf("eval: %zu test windows (W=%d): accuracy %.5f, f1 %.5f, auc %.5f, "
                "tpr %.5f, fpr %.5f, %.4f ms/window\n",
                data.test.rows, model.window_size, report.accuracy, report.f1, report.auc,
                report.tpr, report.fpr, report.inference_time_per_window * 1e3);
    if (!report.warning.empty()) std::printf("eval: warning: %s\n", report.warning.c_str());
    std::printf("eval: wrote %s and %s\n", report_file.c_str(), roc_file.c_str());
    return 0;
}

int cmd_sweep(const RunConfig& config) {
    require_file(config.benign_csv);
    require_file(config.attack_csv);
    const CaptureSet benign = truncated(read_csv(config.benign_csv), config.sweep_max_packets);
    const CaptureSet attack = truncated(read_csv(config.attack_csv), config.sweep_max_packets);

    ExperimentConfig ec;
    ec.window_sizes = config.sweep_sizes;
    ec.stride = config.stride;
    ec.train_fraction = config.train_fraction;
    ec.split_seed = config.split_seed();
    ec.train = config.train;
    ec.train.seed = config.train_seed();
    ec.train.epochs = config.sweep_epochs;
    ec.threshold = config.threshold;

    const ExperimentResult result = run_experiment(benign, attack, ec);

    const std::string sweep_file = report_path(config, "sweep.csv");
    const std::string roc_file = report_path(config, "roc.csv");
    write_sweep_csv(result.rows, sweep_file);
    write_roc_csv(result.last_roc, roc_file);

    for (const SweepRow& row : result.rows) {
        std::printf("sweep: W=%-3d accuracy %.5f f1 %.5f auc %.5f (train %.2f s, %.4f ms/window)\n",
                    row.window, row.accuracy, row.f1, row.auc, row.train_s,
                    row.infer_ms_per_window);
    }
    std::printf("sweep: wrote %s and %s\n", sweep_file.c_str(), roc_file.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Automotive camera traffic lab: interference attack and GRU detector"};
    app.require_subcommand(1);
    app.allow_extras();

    std::string config_path;
    std::string seed_text;
    app.add_option("--config", config_path, "flat key=value config file");
    app.add_option("--seed", seed_text, "master seed (overrides the config file)");

    const char* names[] = {"generate", "attack", "featurize", "train", "eval", "sweep"};
    const char* briefs[] = {"synthesize a benign camera capture",
                            "inject the interference stream into a benign capture",
                            "2-gram histograms of both captures",
                            "train the detector and save the model",
                            "evaluate a saved model on the test split",
                            "window-size sweep with retraining per size"};
    for (std::size_t i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], briefs[i]);
        sub->allow_extras();
        // --config/--seed should also work after the subcommand name
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    CLI::App* sub = app.get_subcommands().front();

    int exit_code = 0;
    try {
        // Remaining "--key value" pairs are config overrides.
        std::vector<ConfigOverride> overrides;
        if (!seed_text.empty()) overrides.emplace_back("seed", seed_text);
        std::vector<std::string> extras = app.remaining();
        const std::vector<std::string> sub_extras = sub->remaining();
        extras.insert(extras.end(), sub_extras.begin(), sub_extras.end());
        for (std::size_t i = 0; i < extras.size(); i += 2) {
            std::string key = extras[i];
            if (key.rfind("--", 0) != 0 || i + 1 >= extras.size()) {
                throw ValidationError("config: expected '--key value' pairs, got '" + key + "'");
            }
            overrides.emplace_back(key.substr(2), extras[i + 1]);
        }

        if (!config_path.empty()) require_file(config_path);
        const RunConfig config = make_config(config_path, overrides);

        const std::string name = sub->get_name();
        if (name == "generate") {
            exit_code = cmd_generate(config);
        } else if (name == "attack") {
            exit_code = cmd_attack(config);
        } else if (name == "featurize") {
            exit_code = cmd_featurize(config);
        } else if (name == "train") {
            exit_code = cmd_train(config);
        } else if (name == "eval") {
            exit_code = cmd_eval(config);
        } else {
            exit_code = cmd_sweep(config);
        }
    } catch (const MissingFileError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        exit_code = kExitMissingFile;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        exit_code = kExitValidation;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        exit_code = kExitValidation;
    } catch (const ModelFormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        exit_code = kExitValidation;
    } catch (const InvalidArgumentError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        exit_code = kExitValidation;
    } catch (const InsufficientDataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        exit_code = kExitValidation;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        exit_code = 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        exit_code = 1;
    }
    return exit_code;
}
