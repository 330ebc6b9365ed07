#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "contprob/errors.hpp"
#include "contprob/prob_core.hpp"

namespace contprob {

enum class Regime { trigonometric, hyperbolic, undefined };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::trigonometric: return "trigonometric";
        case Regime::hyperbolic: return "hyperbolic";
        default: return "undefined";
    }
}

// Closed-form interference analytics for one model:
//   gamma_j  — deviation of the c-marginal from the measured-conditional
//              decomposition,
//   lambda_j — gamma_j normalized by twice the square root of the product of
//              the two decomposition terms (absent when that product is 0),
//   theta_j  — arccos(lambda_j), defined exactly in the trigonometric regime.
struct InterferenceReport {
    std::array<double, 2> gamma{};
    std::array<std::optional<double>, 2> lambda{};
    std::array<std::optional<double>, 2> theta{};
    std::array<Regime, 2> regime{Regime::undefined, Regime::undefined};
    // products p_{j1} p_1^a p_{j2} p_2^a under the lambda square roots
    std::array<double, 2> denominators{};
};

// gamma_j = p_j^c - p_{j1}^{cbar|a} p_1^a - p_{j2}^{chat|a} p_2^a.
// gamma_1 + gamma_2 = 0 and |gamma_j| <= 1 for every valid model.
inline std::array<double, 2> gamma_analytic(const ModelSpec& model) {
    require_valid(model);
    const double pa1 = model.a_law.p_1;
    const double pa2 = 1.0 - pa1;
    const auto pc = marginal_c(model);
    const double pbar1 = model.cbar_given_a1.p_c1_given;
    const double phat1 = model.chat_given_a2.p_c1_given;
    return {pc[0] - pbar1 * pa1 - phat1 * pa2,
            pc[1] - (1.0 - pbar1) * pa1 - (1.0 - phat1) * pa2};
}

inline InterferenceReport lambda_theta(const ModelSpec& model) {
    require_valid(model);
    InterferenceReport rep;
    rep.gamma = gamma_analytic(model);
    const double pa1 = model.a_law.p_1;
    const double pa2 = 1.0 - pa1;
    const double pbar[2] = {model.cbar_given_a1.p_c1_given,
                            1.0 - model.cbar_given_a1.p_c1_given};
    const double phat[2] = {model.chat_given_a2.p_c1_given,
                            1.0 - model.chat_given_a2.p_c1_given};
    for (int j = 0; j < 2; ++j) {
        const double prod = pbar[j] * pa1 * phat[j] * pa2;
        rep.denominators[j] = prod;
        if (prod <= 0.0) {
            rep.regime[j] = Regime::undefined;
            continue;
        }
        const double lam = rep.gamma[j] / (2.0 * std::sqrt(prod));
        rep.lambda[j] = lam;
        if (std::abs(lam) <= 1.0) {
            rep.regime[j] = Regime::trigonometric;
            rep.theta[j] = std::acos(lam);
        } else {
            rep.regime[j] = Regime::hyperbolic;
        }
    }
    return rep;
}

// Picks (p_j^cbar, p_j^chat) with zero interference for given (p_1^a, p_j^c):
// p_j^cbar is placed at position t in the admissible interval
// [max{0, (p_j^c - p_2^a)/p_1^a}, min{1, p_j^c / p_1^a}] and p_j^chat solves
// the classical decomposition exactly.
inline std::pair<double, double> classical_design(double p_a1, double p_c, double t) {
    if (p_a1 <= 0.0 || p_a1 >= 1.0) throw DegenerateA("classical_design: p_1^a not interior");
    if (p_c < 0.0 || p_c > 1.0 || t < 0.0 || t > 1.0) {
        throw RangeError("classical_design: input outside [0, 1]");
    }
    const double pa2 = 1.0 - p_a1;
    const double hi = std::min(1.0, p_c / p_a1);
    // rounding can push the analytic lower endpoint a ulp past hi
    const double lo = std::min(hi, std::max(0.0, (p_c - pa2) / p_a1));
    const double pbar = std::clamp(lo + t * (hi - lo), lo, hi);
    const double phat = std::clamp((p_c - p_a1 * pbar) / pa2, 0.0, 1.0);
    return {pbar, phat};
}

// Result of checking the two regime equivalences in the a-independent case:
//   lambda <= 1  <=>  t1 + t2 >= sqrt(p_c)
//   lambda >= -1 <=>  |t1 - t2| <= sqrt(p_c)
// with t1 = sqrt(p_cbar p_1^a), t2 = sqrt(p_chat p_2^a).
struct RegimeCheck {
    double lambda = 0.0;
    double t1 = 0.0, t2 = 0.0;
    bool upper_equivalence = false;
    bool lower_equivalence = false;
};

inline RegimeCheck regime_equivalences(double p_a1, double p_c, double p_cbar,
                                       double p_chat) {
    if (p_a1 <= 0.0 || p_a1 >= 1.0) throw DegenerateA("regime_equivalences: p_1^a not interior");
    for (double p : {p_c, p_cbar, p_chat}) {
        if (p < 0.0 || p > 1.0) throw RangeError("regime_equivalences: input outside [0, 1]");
    }
    const double pa2 = 1.0 - p_a1;
    RegimeCheck chk;
    chk.t1 = std::sqrt(p_cbar * p_a1);
    chk.t2 = std::sqrt(p_chat * pa2);
    if (chk.t1 * chk.t2 == 0.0) {
        throw ZeroDenominator("regime_equivalences: t_{j1} t_{j2} = 0");
    }
    const double gamma = p_c - p_cbar * p_a1 - p_chat * pa2;
    chk.lambda = gamma / (2.0 * chk.t1 * chk.t2);
    const double root = std::sqrt(p_c);
    // slack absorbs rounding at grid points where both sides are exactly equal
    const double eps = kProbTol;
    const bool up_l = chk.lambda <= 1.0 + eps;
    const bool up_r = chk.t1 + chk.t2 >= root - eps;
    const bool lo_l = chk.lambda >= -1.0 - eps;
    const bool lo_r = std::abs(chk.t1 - chk.t2) <= root + eps;
    chk.upper_equivalence = up_l == up_r;
    chk.lower_equivalence = lo_l == lo_r;
    return chk;
}

// Interval of equal-perturbation values p_j^cbar = p_j^chat keeping
// |lambda_j| <= 1:
//   [p_j^c / (1 + 2 sqrt(p_1^a p_2^a)), p_j^c / (1 - 2 sqrt(p_1^a p_2^a))],
// the upper endpoint capped at 1 (unbounded when p_1^a = 1/2).
struct PerturbationInterval {
    double lo = 0.0;
    double hi = 1.0;
    bool upper_capped = false;
};

inline PerturbationInterval perturbation_interval(double p_a1, double p_c) {
    if (p_a1 <= 0.0 || p_a1 >= 1.0) throw DegenerateA("perturbation_interval: p_1^a not interior");
    if (p_c < 0.0 || p_c > 1.0) throw RangeError("perturbation_interval: p_j^c outside [0, 1]");
    const double s = 2.0 * std::sqrt(p_a1 * (1.0 - p_a1));
    PerturbationInterval iv;
    iv.lo = p_c / (1.0 + s);
    const double denom = 1.0 - s;
    if (denom <= 0.0) {
        iv.hi = 1.0;
        iv.upper_capped = true;
    } else {
        const double hi = p_c / denom;
        iv.upper_capped = hi > 1.0;
        iv.hi = std::min(1.0, hi);
    }
    return iv;
}

// Value of a probability formula together with whether it lies in [0, 1].
struct FlaggedValue {
    double value = 0.0;
    bool valid = true;
};

// Two-event union probability with an interference term:
//   P = p_A1 + p_A2 + 2 sqrt(p_A1 p_A2) cos(theta).
// Values outside [0, 1] are flagged, not clamped.
inline FlaggedValue two_slit_prob(double p_A1, double p_A2, double theta) {
    const double v = p_A1 + p_A2 + 2.0 * std::sqrt(p_A1 * p_A2) * std::cos(theta);
    return {v, v >= -kProbTol && v <= 1.0 + kProbTol};
}

// Total probability formula with an interference term:
//   P = p1 q1 + p2 q2 + 2 sqrt(p1 q1 p2 q2) cos(theta)
// where q_i = P(C|A_i), p_i = P(A_i). Feeding a model's measured conditionals
// and its trigonometric-regime theta reproduces its c-marginal.
inline FlaggedValue tpf_eval(double p_C_given_A1, double p_C_given_A2, double p_A1,
                             double p_A2, double theta) {
    for (double p : {p_C_given_A1, p_C_given_A2, p_A1, p_A2}) {
        if (!(p >= 0.0 && p <= 1.0)) throw RangeError("tpf_eval: probability outside [0, 1]");
    }
    if (std::abs(p_A1 + p_A2 - 1.0) > kProbTol || p_A1 <= 0.0 || p_A2 <= 0.0) {
        throw RangeError("tpf_eval: a-probabilities must be positive and sum to 1");
    }
    const double t1 = p_C_given_A1 * p_A1;
    const double t2 = p_C_given_A2 * p_A2;
    const double v = t1 + t2 + 2.0 * std::sqrt(t1 * t2) * std::cos(theta);
    return {v, v >= -kProbTol && v <= 1.0 + kProbTol};
}

}  // namespace contprob
