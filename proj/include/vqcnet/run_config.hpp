#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "vqcnet/errors.hpp"
#include "vqcnet/expressibility.hpp"
#include "vqcnet/hybrid.hpp"

namespace vqcnet {

// Full configuration of a training run. Strict schema: unknown keys are
// errors, and validation reports every offending key at once so a typo
// cannot silently fall back to a default.
struct TrainRunConfig {
    std::string data_path;
    std::string out_dir = ".";
    TrainConfig train;
    double split_train = 0.8;
    double split_val = 0.1;
    double split_test = 0.1;
    int expressibility_samples = kDefaultFidelitySamples;
    int expressibility_bins = kDefaultFidelityBins;
    int reliability_bins = 10;
    double threshold = 0.5;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["data"] = data_path;
        j["out_dir"] = out_dir;
        j["seed"] = train.seed;
        j["threads"] = train.threads;
        j["qubits"] = train.num_qubits;
        j["template"] = train.template_name;
        j["layers"] = train.layers;
        j["epochs"] = train.epochs;
        j["batch_size"] = train.batch_size;
        j["learning_rate"] = train.learning_rate;
        j["optimizer"] = optimizer_name(train.optimizer);
        j["momentum"] = train.momentum;
        j["step_size"] = train.step_size;
        j["gamma"] = train.gamma;
        j["freeze_pre_net"] = train.freeze_pre_net;
        j["split"] = {{"train", split_train}, {"val", split_val}, {"test", split_test}};
        j["expressibility"] = {{"samples", expressibility_samples},
                               {"bins", expressibility_bins}};
        j["reliability_bins"] = reliability_bins;
        j["threshold"] = threshold;
        return j;
    }

    static TrainRunConfig from_json(const nlohmann::json& j) {
        std::vector<std::string> bad;
        const std::set<std::string> known = {
            "data",       "out_dir",   "seed",          "threads",
            "qubits",     "template",  "layers",        "epochs",
            "batch_size", "learning_rate", "optimizer", "momentum",
            "step_size",  "gamma",     "freeze_pre_net", "split",
            "expressibility", "reliability_bins", "threshold"};
        if (!j.is_object()) throw ConfigError("config root must be a JSON object");
        for (const auto& [key, value] : j.items())
            if (!known.contains(key)) bad.push_back("unknown key '" + key + "'");

        TrainRunConfig cfg;
        auto get = [&](const char* key, auto& dest, bool required = false) {
            if (!j.contains(key)) {
                if (required) bad.push_back(std::string("missing key '") + key + "'");
                return;
            }
            try {
                dest = j.at(key).get<std::decay_t<decltype(dest)>>();
            } catch (const nlohmann::json::exception&) {
                bad.push_back(std::string("bad type for '") + key + "'");
            }
        };
        get("data", cfg.data_path, true);
        get("out_dir", cfg.out_dir);
        get("seed", cfg.train.seed);
        get("threads", cfg.train.threads);
        get("qubits", cfg.train.num_qubits);
        get("template", cfg.train.template_name);
        get("layers", cfg.train.layers);
        get("epochs", cfg.train.epochs);
        get("batch_size", cfg.train.batch_size);
        get("learning_rate", cfg.train.learning_rate);
        get("momentum", cfg.train.momentum);
        get("step_size", cfg.train.step_size);
        get("gamma", cfg.train.gamma);
        get("freeze_pre_net", cfg.train.freeze_pre_net);
        get("reliability_bins", cfg.reliability_bins);
        get("threshold", cfg.threshold);
        if (j.contains("optimizer")) {
            try {
                cfg.train.optimizer = parse_optimizer(j.at("optimizer").get<std::string>());
            } catch (const std::exception&) {
                bad.push_back("bad value for 'optimizer'");
            }
        }
        if (j.contains("split")) {
            const auto& s = j.at("split");
            if (!s.is_object()) {
                bad.push_back("bad type for 'split'");
            } else {
                for (const auto& [key, value] : s.items())
                    if (key != "train" && key != "val" && key != "test")
                        bad.push_back("unknown key 'split." + key + "'");
                try {
                    if (s.contains("train")) cfg.split_train = s.at("train").get<double>();
                    if (s.contains("val")) cfg.split_val = s.at("val").get<double>();
                    if (s.contains("test")) cfg.split_test = s.at("test").get<double>();
                } catch (const nlohmann::json::exception&) {
                    bad.push_back("bad type inside 'split'");
                }
            }
        }
        if (j.contains("expressibility")) {
            const auto& e = j.at("expressibility");
            if (!e.is_object()) {
                bad.push_back("bad type for 'expressibility'");
            } else {
                for (const auto& [key, value] : e.items())
                    if (key != "samples" && key != "bins")
                        bad.push_back("unknown key 'expressibility." + key + "'");
                try {
                    if (e.contains("samples"))
                        cfg.expressibility_samples = e.at("samples").get<int>();
                    if (e.contains("bins")) cfg.expressibility_bins = e.at("bins").get<int>();
                } catch (const nlohmann::json::exception&) {
                    bad.push_back("bad type inside 'expressibility'");
                }
            }
        }

        if (!bad.empty()) {
            std::string msg = "config validation failed:";
            for (const auto& b : bad) msg += " " + b + ";";
            throw ConfigError(msg);
        }
        cfg.validate();
        return cfg;
    }

    static TrainRunConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config file '" + path + "': " + e.what());
        }
        return from_json(j);
    }

    void validate() const {
        std::vector<std::string> bad;
        try {
            train.validate();
        } catch (const ConfigError& e) {
            bad.push_back(e.what());
        }
        if (data_path.empty()) bad.push_back("data path is empty");
        const double total = split_train + split_val + split_test;
        if (split_train <= 0.0 || split_val < 0.0 || split_test < 0.0 ||
            std::abs(total - 1.0) > 1e-9)
            bad.push_back("split fractions must be non-negative and sum to 1");
        if (expressibility_samples < 100) bad.push_back("expressibility.samples must be >= 100");
        if (expressibility_bins < 10) bad.push_back("expressibility.bins must be >= 10");
        if (reliability_bins < 2) bad.push_back("reliability_bins must be >= 2");
        if (threshold < 0.0 || threshold > 1.0) bad.push_back("threshold must be in [0, 1]");
        if (!bad.empty()) {
            std::string msg = "config validation failed:";
            for (const auto& b : bad) msg += " " + b + ";";
            throw ConfigError(msg);
        }
    }
};

} // namespace vqcnet
