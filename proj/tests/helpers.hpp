#pragma once

#include "contprob/prob_core.hpp"
#include "contprob/rng.hpp"

namespace contprob::testing {

// Deterministic random valid model for property tests. The a-marginal is kept
// away from the degenerate endpoints; conditionals may be fully degenerate.
inline ModelSpec random_model(CounterStream& rng) {
    ModelSpec m;
    m.a_law.p_1 = 0.05 + 0.9 * rng.next_unit();
    m.c_given_a1.p_c1_given = rng.next_unit();
    m.c_given_a2.p_c1_given = rng.next_unit();
    m.cbar_given_a1.p_c1_given = rng.next_unit();
    m.cbar_given_a2.p_c1_given = rng.next_unit();
    m.chat_given_a1.p_c1_given = rng.next_unit();
    m.chat_given_a2.p_c1_given = rng.next_unit();
    return m;
}

// The a-independent perturbation model: cbar and chat do not depend on a,
// c has marginal p_c on both branches.
inline ModelSpec independent_case_model(double p_a1, double p_c, double p_cbar,
                                        double p_chat) {
    ModelSpec m;
    m.a_law.p_1 = p_a1;
    m.c_given_a1.p_c1_given = p_c;
    m.c_given_a2.p_c1_given = p_c;
    m.cbar_given_a1.p_c1_given = p_cbar;
    m.cbar_given_a2.p_c1_given = p_cbar;
    m.chat_given_a1.p_c1_given = p_chat;
    m.chat_given_a2.p_c1_given = p_chat;
    return m;
}

// Reference model used throughout the suite: p_1^a = 0.5, c-conditionals
// 0.9 / 0.5 (so p_1^c = 0.7), measured conditionals 0.8 / 0.2, giving
// gamma_1 = 0.2, lambda_1 = 0.5, theta_1 = pi/3.
inline ModelSpec model_m0() {
    ModelSpec m;
    m.a_law.p_1 = 0.5;
    m.c_given_a1.p_c1_given = 0.9;
    m.c_given_a2.p_c1_given = 0.5;
    m.cbar_given_a1.p_c1_given = 0.8;
    m.cbar_given_a2.p_c1_given = 0.8;
    m.chat_given_a1.p_c1_given = 0.2;
    m.chat_given_a2.p_c1_given = 0.2;
    return m;
}

inline ModelSpec symmetric_model() {
    ModelSpec m;  // every probability defaults to 0.5
    return m;
}

}  // namespace contprob::testing
