#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "contprob/errors.hpp"
#include "contprob/prob_core.hpp"

namespace contprob {

inline constexpr int kConfigSchemaVersion = 1;

enum class GeneratorKind { iid, pairwise_xor };
enum class FaultKind { none, squares };

// Parameter sweep request: one flat model key swept over a list of values.
struct SweepSpec {
    std::string param;
    std::vector<double> values;
    std::uint64_t simulate_n = 0;  // 0 = analytic sweep only
};

// Full run configuration, parsed from a flat-key JSON document. The key set
// is normative; unknown keys are rejected so typos cannot silently fall back
// to defaults.
struct RunConfig {
    ModelSpec model;
    std::uint64_t n = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<std::uint64_t> checkpoints;
    GeneratorKind generator = GeneratorKind::iid;
    FaultKind fault_schedule = FaultKind::none;
    std::optional<std::uint64_t> tilde_n;
    std::uint64_t min_check_n = 1000;
    bool dump_latent = false;
    bool dump_measured = false;
    std::optional<SweepSpec> sweep;
};

namespace detail {

inline double get_prob(const nlohmann::json& doc, const std::string& key) {
    if (!doc.contains(key)) throw ConfigError("missing config key: " + key);
    if (!doc.at(key).is_number()) throw ConfigError("config key not a number: " + key);
    return doc.at(key).get<double>();
}

inline double get_prob_or(const nlohmann::json& doc, const std::string& key, double dflt) {
    return doc.contains(key) ? get_prob(doc, key) : dflt;
}

inline bool model_is_symmetric(const ModelSpec& m) {
    for (double p : {m.a_law.p_1, m.c_given_a1.p_c1_given, m.c_given_a2.p_c1_given,
                     m.cbar_given_a1.p_c1_given, m.cbar_given_a2.p_c1_given,
                     m.chat_given_a1.p_c1_given, m.chat_given_a2.p_c1_given}) {
        if (p != 0.5) return false;
    }
    return true;
}

}  // namespace detail

inline ModelSpec model_from_json(const nlohmann::json& doc) {
    ModelSpec m;
    m.a_law.p_1 = detail::get_prob(doc, "model.p_a1");
    m.a_law.value_1 = detail::get_prob_or(doc, "model.a_value1", 1.0);
    m.a_law.value_2 = detail::get_prob_or(doc, "model.a_value2", 0.0);
    m.c_value_1 = detail::get_prob_or(doc, "model.c_value1", 1.0);
    m.c_value_2 = detail::get_prob_or(doc, "model.c_value2", 0.0);
    m.c_given_a1.p_c1_given = detail::get_prob(doc, "model.p_c1_given_a1");
    m.c_given_a2.p_c1_given = detail::get_prob(doc, "model.p_c1_given_a2");
    m.cbar_given_a1.p_c1_given = detail::get_prob(doc, "model.p_cbar1_given_a1");
    m.chat_given_a2.p_c1_given = detail::get_prob(doc, "model.p_chat1_given_a2");
    // off-branch conditionals mirror the reported branch unless stated
    m.cbar_given_a2.p_c1_given =
        detail::get_prob_or(doc, "model.p_cbar1_given_a2", m.cbar_given_a1.p_c1_given);
    m.chat_given_a1.p_c1_given =
        detail::get_prob_or(doc, "model.p_chat1_given_a1", m.chat_given_a2.p_c1_given);
    return m;
}

inline RunConfig config_from_json(const nlohmann::json& doc) {
    static const char* known[] = {
        "schema_version", "model.p_a1", "model.a_value1", "model.a_value2",
        "model.c_value1", "model.c_value2", "model.p_c1_given_a1", "model.p_c1_given_a2",
        "model.p_cbar1_given_a1", "model.p_cbar1_given_a2", "model.p_chat1_given_a1",
        "model.p_chat1_given_a2", "run.n", "run.seeds", "run.checkpoints",
        "run.generator", "run.fault_schedule", "run.tilde_n", "run.min_check_n",
        "run.dump_latent", "run.dump_measured", "sweep.param", "sweep.values",
        "sweep.simulate_n"};
    for (const auto& [key, value] : doc.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("unknown config key: " + key);
    }
    if (!doc.contains("schema_version") ||
        doc.at("schema_version").get<int>() != kConfigSchemaVersion) {
        throw ConfigError("config must declare schema_version = 1");
    }

    RunConfig cfg;
    cfg.model = model_from_json(doc);

    if (!doc.contains("run.n")) throw ConfigError("missing config key: run.n");
    cfg.n = doc.at("run.n").get<std::uint64_t>();
    if (cfg.n < 1) throw ConfigError("run.n must be >= 1");

    if (doc.contains("run.seeds")) {
        cfg.seeds = doc.at("run.seeds").get<std::vector<std::uint64_t>>();
    }
    if (cfg.seeds.empty()) cfg.seeds = {1};

    if (doc.contains("run.checkpoints")) {
        cfg.checkpoints = doc.at("run.checkpoints").get<std::vector<std::uint64_t>>();
    } else {
        for (std::uint64_t c = 10; c < cfg.n; c *= 10) cfg.checkpoints.push_back(c);
        cfg.checkpoints.push_back(cfg.n);
    }
    std::uint64_t prev = 0;
    for (std::uint64_t c : cfg.checkpoints) {
        if (c <= prev || c > cfg.n) {
            throw ConfigError("run.checkpoints must be strictly increasing within [1, n]");
        }
        prev = c;
    }

    const std::string gen = doc.value("run.generator", std::string("iid"));
    if (gen == "iid") {
        cfg.generator = GeneratorKind::iid;
    } else if (gen == "pairwise_xor") {
        cfg.generator = GeneratorKind::pairwise_xor;
        if (!detail::model_is_symmetric(cfg.model)) {
            throw ConfigError(
                "run.generator = pairwise_xor requires a symmetric model "
                "(every probability 0.5)");
        }
    } else {
        throw ConfigError("run.generator must be 'iid' or 'pairwise_xor'");
    }

    const std::string fault = doc.value("run.fault_schedule", std::string("none"));
    if (fault == "none") {
        cfg.fault_schedule = FaultKind::none;
    } else if (fault == "squares") {
        cfg.fault_schedule = FaultKind::squares;
    } else {
        throw ConfigError("run.fault_schedule must be 'none' or 'squares'");
    }

    if (doc.contains("run.tilde_n")) cfg.tilde_n = doc.at("run.tilde_n").get<std::uint64_t>();
    cfg.min_check_n = doc.value("run.min_check_n", std::uint64_t{1000});
    cfg.dump_latent = doc.value("run.dump_latent", false);
    cfg.dump_measured = doc.value("run.dump_measured", false);

    if (doc.contains("sweep.param") || doc.contains("sweep.values")) {
        SweepSpec sw;
        if (!doc.contains("sweep.param") || !doc.contains("sweep.values")) {
            throw ConfigError("sweep requires both sweep.param and sweep.values");
        }
        sw.param = doc.at("sweep.param").get<std::string>();
        sw.values = doc.at("sweep.values").get<std::vector<double>>();
        if (sw.values.empty()) throw ConfigError("sweep.values must be nonempty");
        sw.simulate_n = doc.value("sweep.simulate_n", std::uint64_t{0});
        cfg.sweep = sw;
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    try {
        return config_from_json(doc);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config type error: " + std::string(e.what()));
    }
}

}  // namespace contprob
