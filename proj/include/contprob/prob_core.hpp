#pragma once

#include <array>
#include <cmath>
#include <string>

#include "contprob/errors.hpp"

namespace contprob {

// Comparison tolerance for probability invariant checks.
inline constexpr double kProbTol = 1e-12;

// Law of a two-valued random variable: P(X = value_1) = p_1,
// P(X = value_2) = 1 - p_1.
struct TwoPointLaw {
    double value_1 = 1.0;
    double value_2 = 0.0;
    double p_1 = 0.5;
};

// Law of a two-valued variable conditioned on a stated a-value:
// p_c1_given = P(X = c_1 | a = a_r), complement implied.
struct ConditionalLaw {
    double p_c1_given = 0.5;
};

// Full parametrization of the joint laws of (a, c), (a, cbar) and (a, chat)
// with a shared a-marginal. The three C-type variables are specified only
// through their conditionals given a; the sampler draws them conditionally
// independently given a.
//
// cbar_given_a2 and chat_given_a1 keep every latent record well defined but
// never influence a reported statistic: cbar is only read on the a_1 branch
// and chat only on the a_2 branch.
struct ModelSpec {
    TwoPointLaw a_law;
    double c_value_1 = 1.0;
    double c_value_2 = 0.0;
    ConditionalLaw c_given_a1, c_given_a2;
    ConditionalLaw cbar_given_a1, cbar_given_a2;
    ConditionalLaw chat_given_a1, chat_given_a2;
};

enum class ModelFault {
    none,
    degenerate_a,
    range_error,
    equal_labels,
};

struct ValidationResult {
    bool ok = true;
    ModelFault fault = ModelFault::none;
    std::string detail;

    explicit operator bool() const { return ok; }
};

namespace detail {

inline bool prob_in_unit(double p) {
    return std::isfinite(p) && p >= -kProbTol && p <= 1.0 + kProbTol;
}

}  // namespace detail

// Checks every ModelSpec invariant. Never throws; the result names the first
// violated invariant.
inline ValidationResult validate(const ModelSpec& model) {
    const struct {
        const char* name;
        double p;
    } probs[] = {
        {"a_law.p_1", model.a_law.p_1},
        {"c_given_a1", model.c_given_a1.p_c1_given},
        {"c_given_a2", model.c_given_a2.p_c1_given},
        {"cbar_given_a1", model.cbar_given_a1.p_c1_given},
        {"cbar_given_a2", model.cbar_given_a2.p_c1_given},
        {"chat_given_a1", model.chat_given_a1.p_c1_given},
        {"chat_given_a2", model.chat_given_a2.p_c1_given},
    };
    for (const auto& [name, p] : probs) {
        if (!detail::prob_in_unit(p)) {
            return {false, ModelFault::range_error,
                    std::string(name) + " outside [0, 1]"};
        }
    }
    if (model.a_law.p_1 <= kProbTol || model.a_law.p_1 >= 1.0 - kProbTol) {
        return {false, ModelFault::degenerate_a,
                "a-marginal is degenerate (p_1 must lie strictly inside (0, 1))"};
    }
    if (model.a_law.value_1 == model.a_law.value_2) {
        return {false, ModelFault::equal_labels, "a labels coincide"};
    }
    if (model.c_value_1 == model.c_value_2) {
        return {false, ModelFault::equal_labels, "c labels coincide"};
    }
    return {};
}

// Throwing form of validate.
inline void require_valid(const ModelSpec& model) {
    const ValidationResult r = validate(model);
    if (r.ok) return;
    switch (r.fault) {
        case ModelFault::degenerate_a: throw DegenerateA(r.detail);
        case ModelFault::range_error: throw RangeError(r.detail);
        default: throw InvalidModel(r.detail);
    }
}

// Marginal law of c: p_j^c = P(c=c_j|a=a_1) p_1^a + P(c=c_j|a=a_2) p_2^a.
inline std::array<double, 2> marginal_c(const ModelSpec& model) {
    const double pa1 = model.a_law.p_1;
    const double pa2 = 1.0 - pa1;
    const double p1 =
        model.c_given_a1.p_c1_given * pa1 + model.c_given_a2.p_c1_given * pa2;
    return {p1, 1.0 - p1};
}

}  // namespace contprob
