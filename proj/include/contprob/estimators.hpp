#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "contprob/errors.hpp"
#include "contprob/measurement.hpp"
#include "contprob/prob_core.hpp"

namespace contprob {

struct TildeCounts {
    std::uint64_t n_tilde = 0;
    std::uint64_t c1_count = 0;
};

// Streaming frequency counters for one measured ensemble. All counts are
// exact integers; rates are formed only at read-out, so the finite-N
// decomposition identity holds exactly. Faulted rows are skipped entirely.
//
// Index convention: j, r run over {1, 2} (j = C-value, r = a-branch).
class FrequencyCounts {
  public:
    void add(const MeasuredRow& row) {
        if (row.fault) return;
        ++total_;
        const int r = row.a_outcome;         // 0 -> branch 1 (a_1)
        const int jo = row.original_c_outcome;  // 0 -> c_1
        const int jf = row.final_c_outcome;
        ++branch_[r];
        ++n_[jo][r];
        ++m_[jf][r];
    }

    void add_tilde(std::uint8_t c_code) {
        if (!tilde_) tilde_.emplace();
        ++tilde_->n_tilde;
        if (c_code == 0) ++tilde_->c1_count;
    }

    std::uint64_t total() const { return total_; }
    std::uint64_t branch_count(int r) const { return branch_[r - 1]; }
    std::uint64_t n(int j, int r) const { return n_[j - 1][r - 1]; }
    std::uint64_t m(int j, int r) const { return m_[j - 1][r - 1]; }
    const std::optional<TildeCounts>& tilde() const { return tilde_; }

    // q_jN = (n_j1 + n_j2) / N: relative frequency of c_j among the latent
    // original C-values.
    double q(int j) const {
        return static_cast<double>(n(j, 1) + n(j, 2)) / static_cast<double>(total_);
    }

  private:
    std::uint64_t total_ = 0;
    std::uint64_t branch_[2] = {0, 0};
    std::uint64_t n_[2][2] = {{0, 0}, {0, 0}};
    std::uint64_t m_[2][2] = {{0, 0}, {0, 0}};
    std::optional<TildeCounts> tilde_;
};

// One-pass accumulation over a measured ensemble, optionally with outcomes
// from the auxiliary ensemble.
inline FrequencyCounts accumulate(const MeasuredEnsemble& ensemble,
                                  std::span<const std::uint8_t> tilde_outcomes = {}) {
    if (ensemble.rows.empty()) throw EmptyInput("accumulate: empty ensemble");
    FrequencyCounts counts;
    for (const MeasuredRow& row : ensemble.rows) counts.add(row);
    for (std::uint8_t c : tilde_outcomes) counts.add_tilde(c);
    return counts;
}

// Finite-N decomposition residual:
//   gamma_jN = (n_j1 - m_j1)/N + (n_j2 - m_j2)/N,
// so that q_jN = m_j1/N + m_j2/N + gamma_jN exactly (the numerators are
// combined in integer arithmetic before the single division).
inline std::array<double, 2> gamma_hat(const FrequencyCounts& c) {
    std::array<double, 2> out{};
    const auto N = static_cast<double>(c.total());
    for (int j = 1; j <= 2; ++j) {
        const std::int64_t num =
            static_cast<std::int64_t>(c.n(j, 1)) - static_cast<std::int64_t>(c.m(j, 1)) +
            static_cast<std::int64_t>(c.n(j, 2)) - static_cast<std::int64_t>(c.m(j, 2));
        out[j - 1] = static_cast<double>(num) / N;
    }
    return out;
}

// Conditional relative frequency m_jr / N_r. Undefined (not 0) when the
// branch is empty.
inline double cond_freq(const FrequencyCounts& c, int j, int r) {
    if (c.branch_count(r) == 0) {
        throw UndefinedRate("cond_freq: branch " + std::to_string(r) + " is empty");
    }
    return static_cast<double>(c.m(j, r)) / static_cast<double>(c.branch_count(r));
}

inline std::optional<double> cond_freq_opt(const FrequencyCounts& c, int j, int r) {
    if (c.branch_count(r) == 0) return std::nullopt;
    return static_cast<double>(c.m(j, r)) / static_cast<double>(c.branch_count(r));
}

// Strongly consistent estimate of the c-marginal from the auxiliary
// ensemble's read-out.
inline std::array<double, 2> p_c_hat(const FrequencyCounts& c) {
    if (!c.tilde() || c.tilde()->n_tilde == 0) {
        throw MissingTilde("p_c_hat: no auxiliary ensemble outcomes accumulated");
    }
    const double p1 = static_cast<double>(c.tilde()->c1_count) /
                      static_cast<double>(c.tilde()->n_tilde);
    return {p1, 1.0 - p1};
}

// One prefix snapshot of every tracked statistic. Rates are absent while
// their branch is empty; the analytic columns are absent when no model was
// supplied.
struct TraceRow {
    std::uint64_t N = 0;  // non-faulted count at this checkpoint
    double n1_frac = 0.0;
    double q1 = 0.0, q2 = 0.0;
    std::optional<double> m11_rate, m21_rate, m12_rate, m22_rate;
    double gamma1_hat = 0.0, gamma2_hat = 0.0;
    std::optional<double> gamma1_true, gamma2_true;
    std::optional<double> abs_err1, abs_err2;
};

namespace detail {

inline TraceRow snapshot_row(const FrequencyCounts& c,
                             const std::array<double, 2>* gamma_true) {
    TraceRow row;
    row.N = c.total();
    if (c.total() == 0) return row;
    row.n1_frac = static_cast<double>(c.branch_count(1)) / static_cast<double>(c.total());
    row.q1 = c.q(1);
    row.q2 = c.q(2);
    row.m11_rate = cond_freq_opt(c, 1, 1);
    row.m21_rate = cond_freq_opt(c, 2, 1);
    row.m12_rate = cond_freq_opt(c, 1, 2);
    row.m22_rate = cond_freq_opt(c, 2, 2);
    const auto g = gamma_hat(c);
    row.gamma1_hat = g[0];
    row.gamma2_hat = g[1];
    if (gamma_true) {
        row.gamma1_true = (*gamma_true)[0];
        row.gamma2_true = (*gamma_true)[1];
        row.abs_err1 = std::abs(g[0] - (*gamma_true)[0]);
        row.abs_err2 = std::abs(g[1] - (*gamma_true)[1]);
    }
    return row;
}

}  // namespace detail

// Prefix convergence trace: one row per checkpoint (checkpoints are record
// positions, strictly increasing). gamma_true, when given, fills the analytic
// columns and absolute errors.
inline std::vector<TraceRow> trace(const MeasuredEnsemble& ensemble,
                                   std::span<const std::uint64_t> checkpoints,
                                   const std::array<double, 2>* gamma_true = nullptr) {
    FrequencyCounts counts;
    std::vector<TraceRow> rows;
    rows.reserve(checkpoints.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < ensemble.rows.size() && next < checkpoints.size(); ++i) {
        counts.add(ensemble.rows[i]);
        if (i + 1 == checkpoints[next]) {
            rows.push_back(detail::snapshot_row(counts, gamma_true));
            ++next;
        }
    }
    return rows;
}

}  // namespace contprob
