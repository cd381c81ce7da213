#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vqcnet/dataset.hpp"
#include "vqcnet/errors.hpp"
#include "vqcnet/expressibility.hpp"
#include "vqcnet/hybrid.hpp"
#include "vqcnet/metrics.hpp"

namespace vqcnet {

inline constexpr int kModelFormatVersion = 1;

using json = nlohmann::json;

inline GateKind parse_gate_kind(const std::string& name) {
    static const std::pair<const char*, GateKind> table[] = {
        {"RX", GateKind::RX},     {"RY", GateKind::RY},   {"RZ", GateKind::RZ},
        {"H", GateKind::H},       {"X", GateKind::X},     {"Z", GateKind::Z},
        {"CNOT", GateKind::CNOT}, {"CZ", GateKind::CZ},   {"CRY", GateKind::CRY},
        {"CRZ", GateKind::CRZ}};
    for (const auto& [n, k] : table)
        if (name == n) return k;
    throw DataError("unknown gate kind '" + name + "'");
}

inline json gate_to_json(const GateOp& g) {
    json j;
    j["kind"] = gate_name(g.kind);
    j["target"] = g.target;
    if (g.control) j["control"] = *g.control;
    if (g.angle_slot) {
        j["slot"] = *g.angle_slot;
        j["slot_kind"] = g.slot_kind == SlotKind::trainable ? "trainable" : "input";
    }
    return j;
}

inline GateOp gate_from_json(const json& j) {
    GateOp g;
    g.kind = parse_gate_kind(j.at("kind").get<std::string>());
    g.target = j.at("target").get<int>();
    if (j.contains("control")) g.control = j.at("control").get<int>();
    if (j.contains("slot")) {
        g.angle_slot = j.at("slot").get<int>();
        const std::string sk = j.at("slot_kind").get<std::string>();
        if (sk == "trainable") g.slot_kind = SlotKind::trainable;
        else if (sk == "input") g.slot_kind = SlotKind::input;
        else throw DataError("unknown slot_kind '" + sk + "'");
    }
    return g;
}

inline json circuit_to_json(const CircuitTemplate& t) {
    json j;
    j["id"] = t.id;
    j["num_qubits"] = t.num_qubits;
    j["num_params"] = t.num_params;
    j["num_inputs"] = t.num_inputs;
    j["gates"] = json::array();
    for (const auto& g : t.gates) j["gates"].push_back(gate_to_json(g));
    return j;
}

inline CircuitTemplate circuit_from_json(const json& j) {
    CircuitTemplate t;
    t.id = j.at("id").get<std::string>();
    t.num_qubits = j.at("num_qubits").get<int>();
    t.num_params = j.at("num_params").get<int>();
    t.num_inputs = j.at("num_inputs").get<int>();
    for (const auto& gj : j.at("gates")) t.gates.push_back(gate_from_json(gj));
    t.validate();
    return t;
}

inline json dense_to_json(const DenseLayer& layer) {
    json j;
    j["in_dim"] = layer.in_dim;
    j["out_dim"] = layer.out_dim;
    j["weights"] = layer.weights;
    j["bias"] = layer.bias;
    j["activation"] = activation_name(layer.activation);
    return j;
}

inline DenseLayer dense_from_json(const json& j) {
    DenseLayer layer;
    layer.in_dim = j.at("in_dim").get<int>();
    layer.out_dim = j.at("out_dim").get<int>();
    layer.weights = j.at("weights").get<std::vector<double>>();
    layer.bias = j.at("bias").get<std::vector<double>>();
    layer.activation = parse_activation(j.at("activation").get<std::string>());
    return layer;
}

inline json model_to_json(const HybridModel& model) {
    json j;
    j["format_version"] = kModelFormatVersion;
    j["seed"] = model.seed;
    j["pre_net"] = dense_to_json(model.pre_net);
    j["circuit"] = circuit_to_json(model.circuit);
    j["circuit_params"] = model.circuit_params;
    j["post_net"] = dense_to_json(model.post_net);
    if (!model.config_snapshot.empty())
        j["config"] = json::parse(model.config_snapshot);
    return j;
}

inline HybridModel model_from_json(const json& j) {
    if (!j.contains("format_version"))
        throw DataError("model file: missing format_version");
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion)
        throw DataError("model file: unsupported format_version " + std::to_string(version) +
                        " (expected " + std::to_string(kModelFormatVersion) + ")");
    HybridModel model;
    try {
        model.seed = j.at("seed").get<std::uint64_t>();
        model.pre_net = dense_from_json(j.at("pre_net"));
        model.circuit = circuit_from_json(j.at("circuit"));
        model.circuit_params = j.at("circuit_params").get<std::vector<double>>();
        model.post_net = dense_from_json(j.at("post_net"));
        if (j.contains("config")) model.config_snapshot = j.at("config").dump();
    } catch (const json::exception& e) {
        throw DataError(std::string("model file: malformed content: ") + e.what());
    }
    try {
        model.validate();
    } catch (const std::exception& e) {
        throw DataError(std::string("model file: shape inconsistency: ") + e.what());
    }
    return model;
}

inline void save_model(const HybridModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out << model_to_json(model).dump(2) << "\n";
    if (!out) throw DataError("write failed for '" + path + "'");
}

inline HybridModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("model file '" + path + "': malformed JSON: " + e.what());
    }
    return model_from_json(j);
}

inline json expressibility_to_json(const ExpressibilityReport& r) {
    json j;
    j["template_id"] = r.template_id;
    j["num_qubits"] = r.num_qubits;
    j["num_samples"] = r.num_samples;
    j["num_bins"] = r.num_bins;
    j["histogram"] = r.histogram;
    j["haar_reference"] = r.haar_reference;
    j["exp_kl"] = r.kl_score;
    return j;
}

inline json eval_report_to_json(const EvalReport& r) {
    json j;
    j["accuracy"] = r.accuracy;
    j["auc"] = r.auc;
    j["threshold"] = r.threshold;
    return j;
}

// --- plot-ready CSV emitters -------------------------------------------

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw DataError("write failed for '" + path + "'");
}

inline void write_roc_csv(const std::vector<RocPoint>& points, const std::string& path) {
    std::string s = "fpr,tpr\n";
    for (const auto& p : points)
        s += format_double(p.fpr) + "," + format_double(p.tpr) + "\n";
    write_text_file(path, s);
}

inline void write_pr_csv(const std::vector<PrPoint>& points, const std::string& path) {
    std::string s = "recall,precision\n";
    for (const auto& p : points)
        s += format_double(p.recall) + "," + format_double(p.precision) + "\n";
    write_text_file(path, s);
}

inline void write_reliability_csv(const std::vector<ReliabilityPoint>& points,
                                  const std::string& path) {
    std::string s = "mean_pred,frac_pos,count\n";
    for (const auto& p : points)
        s += format_double(p.mean_predicted) + "," + format_double(p.fraction_positive) + "," +
             std::to_string(p.count) + "\n";
    write_text_file(path, s);
}

inline void write_history_csv(const std::vector<EpochStats>& history, const std::string& path) {
    std::string s = "epoch,loss,train_acc,val_acc\n";
    for (const auto& e : history)
        s += std::to_string(e.epoch) + "," + format_double(e.loss) + "," +
             format_double(e.train_acc) + "," + format_double(e.val_acc) + "\n";
    write_text_file(path, s);
}

inline void write_histogram_csv(const ExpressibilityReport& r, const std::string& path) {
    std::string s = "bin_center,probability\n";
    for (int b = 0; b < r.num_bins; ++b) {
        const double center = (b + 0.5) / r.num_bins;
        s += format_double(center) + "," +
             format_double(r.histogram[static_cast<std::size_t>(b)]) + "\n";
    }
    write_text_file(path, s);
}

} // namespace vqcnet
