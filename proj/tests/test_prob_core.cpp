#include <doctest.h>

#include "contprob/prob_core.hpp"
#include "helpers.hpp"

using namespace contprob;

TEST_CASE("validate accepts the uniform model") {
    const ModelSpec m = testing::symmetric_model();
    CHECK(validate(m).ok);
    CHECK_NOTHROW(require_valid(m));
}

TEST_CASE("validate rejects a degenerate a-marginal") {
    ModelSpec m = testing::symmetric_model();
    m.a_law.p_1 = 1.0;
    const auto r = validate(m);
    CHECK_FALSE(r.ok);
    CHECK(r.fault == ModelFault::degenerate_a);
    CHECK_THROWS_AS(require_valid(m), DegenerateA);

    m.a_law.p_1 = 0.0;
    CHECK_THROWS_AS(require_valid(m), DegenerateA);
}

TEST_CASE("validate rejects out-of-range probabilities") {
    ModelSpec m = testing::symmetric_model();
    m.c_given_a1.p_c1_given = 1.3;
    const auto r = validate(m);
    CHECK_FALSE(r.ok);
    CHECK(r.fault == ModelFault::range_error);
    CHECK_THROWS_AS(require_valid(m), RangeError);
}

TEST_CASE("validate rejects coinciding labels") {
    ModelSpec m = testing::symmetric_model();
    m.a_law.value_2 = m.a_law.value_1;
    CHECK(validate(m).fault == ModelFault::equal_labels);
}

TEST_CASE("marginal_c mixes the conditionals with the a-marginal") {
    ModelSpec m = testing::symmetric_model();
    m.a_law.p_1 = 0.5;
    m.c_given_a1.p_c1_given = 0.9;
    m.c_given_a2.p_c1_given = 0.5;
    CHECK(marginal_c(m)[0] == doctest::Approx(0.7).epsilon(1e-14));

    m.a_law.p_1 = 0.3;
    m.c_given_a1.p_c1_given = 0.0;
    m.c_given_a2.p_c1_given = 1.0;
    CHECK(marginal_c(m)[0] == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("marginal_c with constant conditional reproduces it") {
    ModelSpec m = testing::symmetric_model();
    m.a_law.p_1 = 0.37;
    for (double q : {0.0, 0.25, 0.8, 1.0}) {
        m.c_given_a1.p_c1_given = q;
        m.c_given_a2.p_c1_given = q;
        CHECK(marginal_c(m)[0] == doctest::Approx(q).epsilon(1e-14));
    }
}

TEST_CASE("marginal_c components lie in [0,1] and sum to 1 for random models") {
    CounterStream rng({42, 0});
    for (int i = 0; i < 500; ++i) {
        const ModelSpec m = testing::random_model(rng);
        REQUIRE(validate(m).ok);
        const auto pc = marginal_c(m);
        CHECK(pc[0] >= 0.0);
        CHECK(pc[0] <= 1.0);
        CHECK(pc[0] + pc[1] == doctest::Approx(1.0).epsilon(1e-14));
    }
}
