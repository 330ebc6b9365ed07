#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "contprob/ensemble_gen.hpp"
#include "contprob/errors.hpp"

namespace contprob {

// Deterministic rule marking which indices fail both measurement procedures.
// Every built-in rule faults o(N) indices among {1..N}.
class FaultSchedule {
  public:
    enum class Rule { none, squares };

    static FaultSchedule no_faults() { return FaultSchedule{Rule::none}; }

    bool is_faulted(std::uint64_t index) const {
        if (rule_ == Rule::none) return false;
        const auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(index)));
        // guard sqrt rounding at perfect squares
        for (std::uint64_t s = (r > 0 ? r - 1 : 0); s <= r + 1; ++s) {
            if (s * s == index) return true;
        }
        return false;
    }

    // Number of faulted indices among {1..n}.
    std::uint64_t count_through(std::uint64_t n) const {
        if (rule_ == Rule::none) return 0;
        auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
        while (r * r > n) --r;
        while ((r + 1) * (r + 1) <= n) ++r;
        return r;
    }

    Rule rule() const { return rule_; }

  private:
    explicit FaultSchedule(Rule rule) : rule_(rule) {}
    friend FaultSchedule square_fault_schedule();

    Rule rule_;
};

// Schedule faulting exactly the perfect-square indices; the fault count
// through N is floor(sqrt(N)) = o(N).
inline FaultSchedule square_fault_schedule() {
    return FaultSchedule{FaultSchedule::Rule::squares};
}

// Index partition produced by the a-measurement: k-indices carry a_1,
// m-indices carry a_2; faulted indices appear in neither list.
struct PartitionIndices {
    std::vector<std::uint64_t> k_indices;
    std::vector<std::uint64_t> m_indices;
};

// One index after the full chain. original_c is the latent pre-measurement
// C-value, retained only for the exact finite-N decomposition identity; it is
// not observable data. For faulted indices no outcome fields are meaningful.
struct MeasuredRow {
    std::uint64_t index;
    std::uint8_t a_outcome;
    std::uint8_t final_c_outcome;
    std::uint8_t original_c_outcome;
    bool fault;
};

struct MeasuredEnsemble {
    std::vector<MeasuredRow> rows;
    PartitionIndices partition;
};

// Chain for a single record: the a-measurement fixes a_outcome, then the
// C-value is replaced (cbar on the a_1 branch, chat on the a_2 branch) and
// the C-measurement reads the replaced value.
inline MeasuredRow measure_record(const SystemRecord& rec, const FaultSchedule& faults) {
    MeasuredRow row;
    row.index = rec.index;
    row.fault = faults.is_faulted(rec.index);
    row.a_outcome = rec.a;
    row.final_c_outcome = rec.a == 0 ? rec.cbar : rec.chat;
    row.original_c_outcome = rec.c;
    return row;
}

inline MeasuredEnsemble apply_chain(std::span<const SystemRecord> records,
                                    const FaultSchedule& faults) {
    if (records.empty()) throw EmptyInput("apply_chain: empty record sequence");
    MeasuredEnsemble out;
    out.rows.reserve(records.size());
    for (const SystemRecord& rec : records) {
        const MeasuredRow row = measure_record(rec, faults);
        if (!row.fault) {
            (row.a_outcome == 0 ? out.partition.k_indices : out.partition.m_indices)
                .push_back(row.index);
        }
        out.rows.push_back(row);
    }
    return out;
}

// The auxiliary (tilde) ensemble path: fresh copies measured by the
// C-procedure alone, so the original c-values are read out unchanged.
inline std::vector<std::uint8_t> apply_mc_only(std::span<const SystemRecord> records) {
    if (records.empty()) throw EmptyInput("apply_mc_only: empty record sequence");
    std::vector<std::uint8_t> out;
    out.reserve(records.size());
    for (const SystemRecord& rec : records) out.push_back(rec.c);
    return out;
}

}  // namespace contprob
