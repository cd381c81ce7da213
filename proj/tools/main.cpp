// Command-line front end: data generation, training, evaluation,
// expressibility scoring, and circuit inspection. Every command is
// deterministic given its config and seed; no file contains a timestamp.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vqcnet/dataset.hpp"
#include "vqcnet/expressibility.hpp"
#include "vqcnet/hybrid.hpp"
#include "vqcnet/metrics.hpp"
#include "vqcnet/run_config.hpp"
#include "vqcnet/serialize.hpp"

namespace fs = std::filesystem;
using vqcnet::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw vqcnet::DataError("cannot create output directory '" + dir + "'");
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void write_eval_outputs(const vqcnet::EvalReport& report, const json& extra,
                        const std::string& out_dir) {
    json j = vqcnet::eval_report_to_json(report);
    for (const auto& [key, value] : extra.items()) j[key] = value;
    vqcnet::write_text_file(join(out_dir, "report.json"), j.dump(2) + "\n");
    vqcnet::write_roc_csv(report.roc_points, join(out_dir, "roc.csv"));
    vqcnet::write_pr_csv(report.pr_points, join(out_dir, "pr.csv"));
    vqcnet::write_reliability_csv(report.reliability_points,
                                  join(out_dir, "reliability.csv"));
}

int cmd_gen_data(const std::string& kind, int n, std::uint64_t seed,
                 const std::string& out_path) {
    const vqcnet::Dataset data = vqcnet::gen_dataset(kind, n, seed);
    vqcnet::write_csv(data, out_path);
    std::cout << "wrote " << data.size() << " rows (" << kind << ", d=" << data.feature_dim
              << ") to " << out_path << "\n";
    return kExitOk;
}

int cmd_train(const std::string& config_path, std::optional<std::uint64_t> seed,
              std::optional<std::string> out_dir, std::optional<int> threads) {
    vqcnet::TrainRunConfig cfg = vqcnet::TrainRunConfig::from_file(config_path);
    if (seed) cfg.train.seed = *seed;
    if (out_dir) cfg.out_dir = *out_dir;
    if (threads) cfg.train.threads = *threads;
    cfg.validate();
    ensure_dir(cfg.out_dir);

    vqcnet::Dataset data = vqcnet::read_csv(cfg.data_path);
    vqcnet::assign_splits(data, cfg.split_train, cfg.split_val, cfg.train.seed);

    vqcnet::HybridModel model = vqcnet::make_hybrid_model(data.feature_dim, cfg.train);
    model.config_snapshot = cfg.to_json().dump();

    const auto history = vqcnet::train(model, data, cfg.train);
    vqcnet::save_model(model, join(cfg.out_dir, "model.json"));
    vqcnet::write_history_csv(history, join(cfg.out_dir, "history.csv"));

    const auto test_rows = data.indices_of(vqcnet::Split::test);
    if (test_rows.empty()) throw vqcnet::DataError("train: empty test split");
    const auto scores = vqcnet::predict_scores(model, test_rows, data, cfg.train.threads);
    std::vector<int> labels(test_rows.size());
    for (std::size_t i = 0; i < test_rows.size(); ++i) labels[i] = data.labels[test_rows[i]];
    const vqcnet::EvalReport report =
        vqcnet::evaluate(scores, labels, cfg.threshold, cfg.reliability_bins);

    const vqcnet::ExpressibilityReport exp = vqcnet::expressibility_score(
        model.circuit, cfg.expressibility_samples, cfg.expressibility_bins, cfg.train.seed,
        cfg.train.threads);

    json extra;
    extra["template"] = cfg.train.template_name;
    extra["layers"] = cfg.train.layers;
    extra["qubits"] = cfg.train.num_qubits;
    extra["exp_kl"] = exp.kl_score;
    extra["n_train"] = data.indices_of(vqcnet::Split::train).size();
    extra["n_val"] = data.indices_of(vqcnet::Split::val).size();
    extra["n_test"] = test_rows.size();
    write_eval_outputs(report, extra, cfg.out_dir);

    std::cout << "test_acc=" << vqcnet::format_double(report.accuracy)
              << " auc=" << vqcnet::format_double(report.auc) << "\n";
    return kExitOk;
}

int cmd_eval(const std::string& model_path, const std::string& data_path,
             const std::string& out_dir, int threads, double threshold,
             int reliability_bins) {
    const vqcnet::HybridModel model = vqcnet::load_model(model_path);
    const vqcnet::Dataset data = vqcnet::read_csv(data_path);
    if (data.feature_dim != model.feature_dim())
        throw vqcnet::DataError("feature dimension mismatch: data has " +
                                std::to_string(data.feature_dim) + ", model expects " +
                                std::to_string(model.feature_dim()));
    ensure_dir(out_dir);

    const auto scores = vqcnet::predict_scores(model, data, threads);
    const vqcnet::EvalReport report =
        vqcnet::evaluate(scores, data.labels, threshold, reliability_bins);

    json extra;
    extra["template"] = model.circuit.id;
    extra["qubits"] = model.num_qubits();
    extra["n_samples"] = data.size();
    write_eval_outputs(report, extra, out_dir);

    std::cout << "accuracy=" << vqcnet::format_double(report.accuracy)
              << " auc=" << vqcnet::format_double(report.auc) << "\n";
    return kExitOk;
}

int cmd_expressibility(const std::string& template_name, int qubits, int layers, int samples,
                       int bins, std::uint64_t seed, const std::string& out_dir,
                       int threads) {
    const vqcnet::CircuitTemplate t = vqcnet::builtin_template(template_name, qubits, layers);
    const vqcnet::ExpressibilityReport report =
        vqcnet::expressibility_score(t, samples, bins, seed, threads);
    ensure_dir(out_dir);
    vqcnet::write_text_file(join(out_dir, "expressibility.json"),
                            vqcnet::expressibility_to_json(report).dump(2) + "\n");
    vqcnet::write_histogram_csv(report, join(out_dir, "expressibility_hist.csv"));
    std::cout << template_name << " " << qubits << " " << layers << " "
              << vqcnet::format_double(report.kl_score) << "\n";
    return kExitOk;
}

int cmd_describe_circuit(const std::string& template_name, int qubits, int layers,
                         bool as_json) {
    const vqcnet::CircuitTemplate t = vqcnet::builtin_template(template_name, qubits, layers);
    if (as_json) {
        std::cout << vqcnet::circuit_to_json(t).dump(2) << "\n";
        return kExitOk;
    }
    std::cout << "template " << t.id << "  qubits " << t.num_qubits << "  layers " << layers
              << "\n";
    std::cout << "trainable params " << t.num_params << "  input slots " << t.num_inputs
              << "\n";
    for (std::size_t i = 0; i < t.gates.size(); ++i) {
        const auto& g = t.gates[i];
        std::cout << "  " << i << ": " << vqcnet::gate_name(g.kind);
        if (g.control)
            std::cout << " q" << *g.control << " -> q" << g.target;
        else
            std::cout << " q" << g.target;
        if (g.angle_slot) {
            const char* space = g.slot_kind == vqcnet::SlotKind::trainable ? "theta" : "input";
            std::cout << " " << space << "[" << *g.angle_slot << "]";
        }
        std::cout << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid quantum-classical classifier toolkit"};
    app.require_subcommand(1);

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "generate a synthetic dataset CSV");
    std::string gen_kind = "blobs";
    int gen_n = 200;
    std::uint64_t gen_seed = 42;
    std::string gen_out = "data.csv";
    gen->add_option("--kind", gen_kind, "blobs | moons | bernoulli_scores");
    gen->add_option("--n", gen_n, "number of samples (>= 10)");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--out", gen_out, "output CSV path");

    // train
    auto* tr = app.add_subcommand("train", "train a hybrid model from a JSON config");
    std::string tr_config;
    std::optional<std::uint64_t> tr_seed;
    std::optional<std::string> tr_out;
    std::optional<int> tr_threads;
    tr->add_option("--config", tr_config, "JSON config path")->required();
    tr->add_option("--seed", tr_seed, "override the config seed");
    tr->add_option("--out-dir", tr_out, "override the config output directory");
    tr->add_option("--threads", tr_threads, "override the config worker count");

    // eval
    auto* ev = app.add_subcommand("eval", "evaluate a saved model on a dataset CSV");
    std::string ev_model, ev_data, ev_out = ".";
    int ev_threads = 1;
    double ev_threshold = 0.5;
    int ev_bins = 10;
    ev->add_option("--model", ev_model, "model JSON path")->required();
    ev->add_option("--data", ev_data, "dataset CSV path")->required();
    ev->add_option("--out-dir", ev_out, "output directory");
    ev->add_option("--threads", ev_threads, "worker count");
    ev->add_option("--threshold", ev_threshold, "accuracy threshold");
    ev->add_option("--reliability-bins", ev_bins, "reliability curve bins");

    // expressibility
    auto* ex = app.add_subcommand("expressibility", "score a circuit template");
    std::string ex_template = "vqc1";
    int ex_qubits = 4, ex_layers = 1;
    int ex_samples = vqcnet::kDefaultFidelitySamples;
    int ex_bins = vqcnet::kDefaultFidelityBins;
    std::uint64_t ex_seed = 42;
    std::string ex_out = ".";
    int ex_threads = 1;
    ex->add_option("--template", ex_template, "vqc1..vqc6");
    ex->add_option("--qubits", ex_qubits, "circuit width");
    ex->add_option("--layers", ex_layers, "circuit depth");
    ex->add_option("--samples", ex_samples, "fidelity pairs (>= 100)");
    ex->add_option("--bins", ex_bins, "histogram bins (>= 10)");
    ex->add_option("--seed", ex_seed, "RNG seed");
    ex->add_option("--out-dir", ex_out, "output directory");
    ex->add_option("--threads", ex_threads, "worker count");

    // describe-circuit
    auto* dc = app.add_subcommand("describe-circuit", "print a template's gate list");
    std::string dc_template = "vqc1";
    int dc_qubits = 4, dc_layers = 1;
    bool dc_json = false;
    dc->add_option("--template", dc_template, "vqc1..vqc6");
    dc->add_option("--qubits", dc_qubits, "circuit width");
    dc->add_option("--layers", dc_layers, "circuit depth");
    dc->add_flag("--json", dc_json, "emit JSON instead of text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (gen->parsed()) return cmd_gen_data(gen_kind, gen_n, gen_seed, gen_out);
        if (tr->parsed()) return cmd_train(tr_config, tr_seed, tr_out, tr_threads);
        if (ev->parsed())
            return cmd_eval(ev_model, ev_data, ev_out, ev_threads, ev_threshold, ev_bins);
        if (ex->parsed())
            return cmd_expressibility(ex_template, ex_qubits, ex_layers, ex_samples, ex_bins,
                                      ex_seed, ex_out, ex_threads);
        if (dc->parsed()) return cmd_describe_circuit(dc_template, dc_qubits, dc_layers, dc_json);
    } catch (const vqcnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const vqcnet::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const vqcnet::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
