#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "contprob/config.hpp"
#include "contprob/ensemble_gen.hpp"
#include "contprob/errors.hpp"
#include "contprob/estimators.hpp"
#include "contprob/interference.hpp"
#include "contprob/measurement.hpp"

namespace contprob {

// Exit codes shared by all commands.
enum ExitCode : int {
    exit_pass = 0,
    exit_tolerance_failure = 1,
    exit_config_error = 2,
    exit_io_error = 3,
};

enum class OutputFormat { csv, json_lines };

inline constexpr int kOutputSchemaVersion = 1;

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt(const std::optional<double>& v) {
    return v ? fmt(*v) : std::string();
}

inline nlohmann::ordered_json opt_json(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path.string());
    return out;
}

}  // namespace detail

// Per-statistic tolerances for the simulate pass/fail verdict: four binomial
// standard deviations, computed from the analytic model values at sample
// size n, optionally widened by a constant factor.
struct Tolerances {
    double gamma = 0.0;
    double n1_frac = 0.0;
    double m11_rate = 0.0;
    double m12_rate = 0.0;
};

inline Tolerances default_tolerances(const ModelSpec& model, std::uint64_t n,
                                     double widen = 1.0) {
    const double pa1 = model.a_law.p_1;
    const double pa2 = 1.0 - pa1;
    const double pbar = model.cbar_given_a1.p_c1_given;
    const double phat = model.chat_given_a2.p_c1_given;
    // per-index decomposition term d = I{c=c1} - I{final=c1}; its variance
    // follows from the branch conditionals
    const double alpha1 = model.c_given_a1.p_c1_given;
    const double alpha2 = model.c_given_a2.p_c1_given;
    const double ed = pa1 * (alpha1 - pbar) + pa2 * (alpha2 - phat);
    const double ed2 = pa1 * (alpha1 * (1.0 - pbar) + (1.0 - alpha1) * pbar) +
                       pa2 * (alpha2 * (1.0 - phat) + (1.0 - alpha2) * phat);
    const double var_d = std::max(0.0, ed2 - ed * ed);
    const auto dn = static_cast<double>(n);
    Tolerances tol;
    tol.gamma = 4.0 * widen * std::sqrt(var_d / dn);
    tol.n1_frac = 4.0 * widen * std::sqrt(pa1 * pa2 / dn);
    tol.m11_rate = 4.0 * widen * std::sqrt(pbar * (1.0 - pbar) / (dn * pa1));
    tol.m12_rate = 4.0 * widen * std::sqrt(phat * (1.0 - phat) / (dn * pa2));
    return tol;
}

struct SeedResult {
    std::uint64_t seed = 0;
    FrequencyCounts counts;
    std::vector<TraceRow> rows;
    bool checked = false;
    bool pass = true;
    std::vector<std::string> failures;
};

namespace detail {

inline void write_latent_row(std::ostream& out, const SystemRecord& rec) {
    out << rec.index << ',' << int(rec.a) << ',' << int(rec.c) << ',' << int(rec.cbar)
        << ',' << int(rec.chat) << '\n';
}

inline void write_measured_row(std::ostream& out, const SystemRecord& rec,
                               const MeasuredRow& row) {
    out << rec.index << ',' << int(rec.a) << ',' << int(rec.c) << ',' << int(rec.cbar)
        << ',' << int(rec.chat) << ',';
    if (!row.fault) out << (row.a_outcome == 0 ? 'k' : 'm');
    out << ',';
    if (!row.fault) out << int(row.final_c_outcome);
    out << ',' << (row.fault ? 1 : 0) << '\n';
}

}  // namespace detail

// Runs the full measurement-and-count pipeline for one master seed,
// streaming: no per-record storage beyond the counters and trace rows.
inline SeedResult run_seed(const RunConfig& cfg, std::uint64_t master_seed,
                           std::ostream* latent_dump = nullptr,
                           std::ostream* measured_dump = nullptr) {
    const FaultSchedule faults = cfg.fault_schedule == FaultKind::squares
                                     ? square_fault_schedule()
                                     : FaultSchedule::no_faults();
    const std::array<double, 2> gamma_true = gamma_analytic(cfg.model);

    SeedResult res;
    res.seed = master_seed;
    std::size_t next_cp = 0;
    auto consume = [&](const SystemRecord& rec) {
        if (latent_dump) detail::write_latent_row(*latent_dump, rec);
        const MeasuredRow row = measure_record(rec, faults);
        if (measured_dump) detail::write_measured_row(*measured_dump, rec, row);
        res.counts.add(row);
        if (next_cp < cfg.checkpoints.size() && rec.index == cfg.checkpoints[next_cp]) {
            res.rows.push_back(detail::snapshot_row(res.counts, &gamma_true));
            ++next_cp;
        }
    };
    const SeedSpec main_seed{master_seed, 0};
    if (cfg.generator == GeneratorKind::iid) {
        visit_iid(cfg.model, cfg.n, main_seed, consume);
    } else {
        visit_pairwise_xor(cfg.n, main_seed, consume);
    }
    if (cfg.tilde_n && *cfg.tilde_n > 0) {
        visit_iid(cfg.model, *cfg.tilde_n, SeedSpec{master_seed, 1},
                  [&](const SystemRecord& rec) { res.counts.add_tilde(rec.c); });
    }
    return res;
}

inline void check_seed(SeedResult& res, const ModelSpec& model, const Tolerances& tol,
                       std::uint64_t min_check_n) {
    if (res.counts.total() < min_check_n) return;  // small-N runs are not judged
    res.checked = true;
    auto fail = [&](const std::string& what) {
        res.pass = false;
        res.failures.push_back(what);
    };
    const auto g = gamma_hat(res.counts);
    const auto g_true = gamma_analytic(model);
    if (std::abs(g[0] - g_true[0]) > tol.gamma) fail("gamma1");
    const double n1_frac = static_cast<double>(res.counts.branch_count(1)) /
                           static_cast<double>(res.counts.total());
    if (std::abs(n1_frac - model.a_law.p_1) > tol.n1_frac) fail("n1_frac");
    const auto m11 = cond_freq_opt(res.counts, 1, 1);
    const auto m12 = cond_freq_opt(res.counts, 1, 2);
    if (!m11 || std::abs(*m11 - model.cbar_given_a1.p_c1_given) > tol.m11_rate) {
        fail("m11_rate");
    }
    if (!m12 || std::abs(*m12 - model.chat_given_a2.p_c1_given) > tol.m12_rate) {
        fail("m12_rate");
    }
}

// ---------------------------------------------------------------------------
// Trace table emission (fixed column order).

inline constexpr const char* kTraceHeader =
    "N,N1_frac,q1,q2,m11_rate,m21_rate,m12_rate,m22_rate,gamma1_hat,gamma2_hat,"
    "gamma1_true,gamma2_true,abs_err1,abs_err2";

inline void write_trace(std::ostream& out, const std::vector<TraceRow>& rows,
                        OutputFormat format) {
    using detail::fmt;
    if (format == OutputFormat::csv) {
        out << kTraceHeader << '\n';
        for (const TraceRow& r : rows) {
            out << r.N << ',' << fmt(r.n1_frac) << ',' << fmt(r.q1) << ',' << fmt(r.q2)
                << ',' << fmt(r.m11_rate) << ',' << fmt(r.m21_rate) << ','
                << fmt(r.m12_rate) << ',' << fmt(r.m22_rate) << ',' << fmt(r.gamma1_hat)
                << ',' << fmt(r.gamma2_hat) << ',' << fmt(r.gamma1_true) << ','
                << fmt(r.gamma2_true) << ',' << fmt(r.abs_err1) << ',' << fmt(r.abs_err2)
                << '\n';
        }
    } else {
        for (const TraceRow& r : rows) {
            nlohmann::ordered_json j;
            j["N"] = r.N;
            j["N1_frac"] = r.n1_frac;
            j["q1"] = r.q1;
            j["q2"] = r.q2;
            j["m11_rate"] = detail::opt_json(r.m11_rate);
            j["m21_rate"] = detail::opt_json(r.m21_rate);
            j["m12_rate"] = detail::opt_json(r.m12_rate);
            j["m22_rate"] = detail::opt_json(r.m22_rate);
            j["gamma1_hat"] = r.gamma1_hat;
            j["gamma2_hat"] = r.gamma2_hat;
            j["gamma1_true"] = detail::opt_json(r.gamma1_true);
            j["gamma2_true"] = detail::opt_json(r.gamma2_true);
            j["abs_err1"] = detail::opt_json(r.abs_err1);
            j["abs_err2"] = detail::opt_json(r.abs_err2);
            out << j.dump() << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// analyze

inline nlohmann::ordered_json analysis_document(const ModelSpec& model) {
    const InterferenceReport rep = lambda_theta(model);
    const auto pc = marginal_c(model);

    nlohmann::ordered_json doc;
    doc["schema_version"] = kOutputSchemaVersion;
    doc["command"] = "analyze";
    doc["model"]["p_a1"] = model.a_law.p_1;
    doc["model"]["p_c1_given_a1"] = model.c_given_a1.p_c1_given;
    doc["model"]["p_c1_given_a2"] = model.c_given_a2.p_c1_given;
    doc["model"]["p_cbar1_given_a1"] = model.cbar_given_a1.p_c1_given;
    doc["model"]["p_chat1_given_a2"] = model.chat_given_a2.p_c1_given;
    doc["marginal_c"] = {pc[0], pc[1]};
    doc["gamma"] = {rep.gamma[0], rep.gamma[1]};
    doc["lambda"] = {detail::opt_json(rep.lambda[0]), detail::opt_json(rep.lambda[1])};
    doc["theta"] = {detail::opt_json(rep.theta[0]), detail::opt_json(rep.theta[1])};
    doc["regime"] = {regime_name(rep.regime[0]), regime_name(rep.regime[1])};
    doc["denominators"] = {rep.denominators[0], rep.denominators[1]};
    for (int j = 0; j < 2; ++j) {
        const double p_c = pc[j];
        const double pa1 = model.a_law.p_1;
        const double pa2 = 1.0 - pa1;
        const double lo = std::max(0.0, (p_c - pa2) / pa1);
        const double hi = std::min(1.0, p_c / pa1);
        const std::string key = "j" + std::to_string(j + 1);
        doc["classical_interval"][key] = {lo, hi};
        const PerturbationInterval iv = perturbation_interval(pa1, p_c);
        doc["perturbation_interval"][key]["lo"] = iv.lo;
        doc["perturbation_interval"][key]["hi"] = iv.hi;
        doc["perturbation_interval"][key]["upper_capped"] = iv.upper_capped;
    }
    return doc;
}

inline int cmd_analyze(const RunConfig& cfg, const std::filesystem::path& out_dir,
                       OutputFormat /*format*/, bool quiet) {
    require_valid(cfg.model);
    const nlohmann::ordered_json doc = analysis_document(cfg.model);
    std::filesystem::create_directories(out_dir);
    auto out = detail::open_out(out_dir / "analysis.json");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write failed: analysis.json");
    if (!quiet) std::cout << doc.dump(2) << '\n';
    return exit_pass;
}

// ---------------------------------------------------------------------------
// simulate

inline nlohmann::ordered_json seed_summary(const SeedResult& res) {
    using detail::opt_json;
    const FrequencyCounts& c = res.counts;
    const auto g = gamma_hat(c);
    nlohmann::ordered_json j;
    j["seed"] = res.seed;
    j["N"] = c.total();
    j["N1"] = c.branch_count(1);
    j["N2"] = c.branch_count(2);
    j["N1_frac"] = static_cast<double>(c.branch_count(1)) / static_cast<double>(c.total());
    j["q1"] = c.q(1);
    j["q2"] = c.q(2);
    j["m11_rate"] = opt_json(cond_freq_opt(c, 1, 1));
    j["m21_rate"] = opt_json(cond_freq_opt(c, 2, 1));
    j["m12_rate"] = opt_json(cond_freq_opt(c, 1, 2));
    j["m22_rate"] = opt_json(cond_freq_opt(c, 2, 2));
    j["gamma1_hat"] = g[0];
    j["gamma2_hat"] = g[1];
    if (c.tilde()) {
        j["p_c1_hat"] = p_c_hat(c)[0];
    } else {
        j["p_c1_hat"] = nullptr;
    }
    j["checked"] = res.checked;
    j["pass"] = res.pass;
    j["failures"] = res.failures;
    return j;
}

inline int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir,
                        OutputFormat format, bool quiet) {
    require_valid(cfg.model);
    const Tolerances tol = default_tolerances(cfg.model, cfg.n);
    const auto g_true = gamma_analytic(cfg.model);

    std::filesystem::create_directories(out_dir);
    std::vector<SeedResult> results;
    results.reserve(cfg.seeds.size());
    for (std::uint64_t seed : cfg.seeds) {
        std::optional<std::ofstream> latent, measured;
        if (cfg.dump_latent) {
            latent = detail::open_out(out_dir / ("samples_seed_" + std::to_string(seed) + ".csv"));
            *latent << "index,a,c,cbar,chat\n";
        }
        if (cfg.dump_measured) {
            measured = detail::open_out(out_dir /
                                        ("measured_seed_" + std::to_string(seed) + ".csv"));
            *measured << "index,a,c,cbar,chat,branch,final_c,fault\n";
        }
        SeedResult res = run_seed(cfg, seed, latent ? &*latent : nullptr,
                                  measured ? &*measured : nullptr);
        check_seed(res, cfg.model, tol, cfg.min_check_n);

        const std::string ext = format == OutputFormat::csv ? ".csv" : ".jsonl";
        auto trace_out =
            detail::open_out(out_dir / ("trace_seed_" + std::to_string(seed) + ext));
        write_trace(trace_out, res.rows, format);
        results.push_back(std::move(res));
    }

    std::size_t checked = 0, failed = 0;
    for (const SeedResult& r : results) {
        checked += r.checked ? 1 : 0;
        failed += (r.checked && !r.pass) ? 1 : 0;
    }
    // seed-robust verdict: one outlier allowed per 20 checked seeds
    const bool overall_pass = failed <= checked / 20;

    nlohmann::ordered_json doc;
    doc["schema_version"] = kOutputSchemaVersion;
    doc["command"] = "simulate";
    doc["generator"] = cfg.generator == GeneratorKind::iid ? "iid" : "pairwise_xor";
    doc["fault_schedule"] = cfg.fault_schedule == FaultKind::none ? "none" : "squares";
    doc["n"] = cfg.n;
    doc["tilde_n"] =
        cfg.tilde_n ? nlohmann::ordered_json(*cfg.tilde_n) : nlohmann::ordered_json(nullptr);
    doc["analytic"]["p_c1"] = marginal_c(cfg.model)[0];
    doc["analytic"]["gamma1"] = g_true[0];
    doc["analytic"]["gamma2"] = g_true[1];
    doc["tolerances"]["gamma1"] = tol.gamma;
    doc["tolerances"]["n1_frac"] = tol.n1_frac;
    doc["tolerances"]["m11_rate"] = tol.m11_rate;
    doc["tolerances"]["m12_rate"] = tol.m12_rate;
    doc["tolerances"]["min_check_n"] = cfg.min_check_n;
    doc["seeds"] = nlohmann::ordered_json::array();
    for (const SeedResult& r : results) doc["seeds"].push_back(seed_summary(r));
    doc["num_checked"] = checked;
    doc["num_failed"] = failed;
    doc["overall_pass"] = overall_pass;

    auto out = detail::open_out(out_dir / "summary.json");
    out << doc.dump(2) << '\n';
    if (!quiet) {
        std::cout << (overall_pass ? "PASS" : "FAIL") << ": " << checked - failed << "/"
                  << checked << " checked seeds within tolerance ("
                  << results.size() - checked << " below min_check_n)\n";
    }
    return overall_pass ? exit_pass : exit_tolerance_failure;
}

// ---------------------------------------------------------------------------
// sweep

inline void set_model_param(ModelSpec& model, const std::string& key, double value) {
    if (key == "model.p_a1") model.a_law.p_1 = value;
    else if (key == "model.p_c1_given_a1") model.c_given_a1.p_c1_given = value;
    else if (key == "model.p_c1_given_a2") model.c_given_a2.p_c1_given = value;
    else if (key == "model.p_cbar1_given_a1") model.cbar_given_a1.p_c1_given = value;
    else if (key == "model.p_cbar1_given_a2") model.cbar_given_a2.p_c1_given = value;
    else if (key == "model.p_chat1_given_a1") model.chat_given_a1.p_c1_given = value;
    else if (key == "model.p_chat1_given_a2") model.chat_given_a2.p_c1_given = value;
    else throw ConfigError("sweep.param not a model key: " + key);
}

struct SweepRow {
    double value = 0.0;
    std::string status = "ok";
    std::optional<InterferenceReport> report;
    std::optional<double> gamma1_hat;
    std::optional<double> abs_err1;
};

inline std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
    if (!cfg.sweep) throw ConfigError("sweep command requires sweep.param / sweep.values");
    const SweepSpec& sw = *cfg.sweep;
    std::vector<SweepRow> rows;
    rows.reserve(sw.values.size());
    for (double v : sw.values) {
        SweepRow row;
        row.value = v;
        ModelSpec model = cfg.model;
        try {
            set_model_param(model, sw.param, v);
            const ValidationResult vr = validate(model);
            if (!vr.ok) {
                row.status = vr.fault == ModelFault::degenerate_a ? "DegenerateA"
                                                                  : "RangeError";
                rows.push_back(row);
                continue;
            }
            row.report = lambda_theta(model);
            if (sw.simulate_n > 0) {
                RunConfig point = cfg;
                point.model = model;
                point.n = sw.simulate_n;
                point.checkpoints = {sw.simulate_n};
                point.tilde_n.reset();
                point.dump_latent = point.dump_measured = false;
                const SeedResult res = run_seed(point, cfg.seeds.front());
                row.gamma1_hat = gamma_hat(res.counts)[0];
                row.abs_err1 = std::abs(*row.gamma1_hat - row.report->gamma[0]);
            }
        } catch (const Error& e) {
            row.status = e.what();
        }
        rows.push_back(row);
    }
    return rows;
}

inline int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir,
                     OutputFormat format, bool quiet) {
    const std::vector<SweepRow> rows = run_sweep(cfg);
    std::filesystem::create_directories(out_dir);
    const std::string ext = format == OutputFormat::csv ? ".csv" : ".jsonl";
    auto out = detail::open_out(out_dir / ("sweep" + ext));
    using detail::fmt;
    if (format == OutputFormat::csv) {
        out << "param,value,status,gamma1,gamma2,lambda1,lambda2,theta1,theta2,"
               "regime1,regime2,gamma1_hat,abs_err1\n";
        for (const SweepRow& r : rows) {
            out << cfg.sweep->param << ',' << fmt(r.value) << ',' << r.status << ',';
            if (r.report) {
                const InterferenceReport& rep = *r.report;
                out << fmt(rep.gamma[0]) << ',' << fmt(rep.gamma[1]) << ','
                    << fmt(rep.lambda[0]) << ',' << fmt(rep.lambda[1]) << ','
                    << fmt(rep.theta[0]) << ',' << fmt(rep.theta[1]) << ','
                    << regime_name(rep.regime[0]) << ',' << regime_name(rep.regime[1]);
            } else {
                out << ",,,,,,,";
            }
            out << ',' << fmt(r.gamma1_hat) << ',' << fmt(r.abs_err1) << '\n';
        }
    } else {
        for (const SweepRow& r : rows) {
            nlohmann::ordered_json j;
            j["param"] = cfg.sweep->param;
            j["value"] = r.value;
            j["status"] = r.status;
            if (r.report) {
                j["gamma"] = {r.report->gamma[0], r.report->gamma[1]};
                j["lambda"] = {detail::opt_json(r.report->lambda[0]),
                               detail::opt_json(r.report->lambda[1])};
                j["theta"] = {detail::opt_json(r.report->theta[0]),
                              detail::opt_json(r.report->theta[1])};
                j["regime"] = {regime_name(r.report->regime[0]),
                               regime_name(r.report->regime[1])};
            }
            j["gamma1_hat"] = detail::opt_json(r.gamma1_hat);
            j["abs_err1"] = detail::opt_json(r.abs_err1);
            out << j.dump() << '\n';
        }
    }
    if (!quiet) std::cout << "sweep: " << rows.size() << " points written\n";
    return exit_pass;
}

}  // namespace contprob
