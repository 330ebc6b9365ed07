#include <doctest.h>

#include <cmath>
#include <numbers>

#include "contprob/interference.hpp"
#include "helpers.hpp"

using namespace contprob;
using std::numbers::pi;

TEST_CASE("gamma_analytic on the reference model") {
    const auto g = gamma_analytic(testing::model_m0());
    CHECK(g[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(-0.2).epsilon(1e-14));
}

TEST_CASE("undisturbed measurement gives the classical decomposition") {
    ModelSpec m = testing::model_m0();
    m.cbar_given_a1 = m.c_given_a1;
    m.chat_given_a2 = m.c_given_a2;
    const auto g = gamma_analytic(m);
    CHECK(std::abs(g[0]) <= 1e-14);
    CHECK(std::abs(g[1]) <= 1e-14);
}

TEST_CASE("gamma sums to zero and is bounded for random models") {
    CounterStream rng({9, 0});
    for (int i = 0; i < 1000; ++i) {
        const auto g = gamma_analytic(testing::random_model(rng));
        CHECK(std::abs(g[0] + g[1]) <= 1e-12);
        CHECK(std::abs(g[0]) <= 1.0 + 1e-12);
    }
}

TEST_CASE("lambda_theta on the reference model") {
    const auto rep = lambda_theta(testing::model_m0());
    REQUIRE(rep.lambda[0].has_value());
    CHECK(*rep.lambda[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(*rep.theta[0] == doctest::Approx(pi / 3).epsilon(1e-12));
    CHECK(*rep.lambda[1] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(*rep.theta[1] == doctest::Approx(2 * pi / 3).epsilon(1e-12));
    CHECK(rep.regime[0] == Regime::trigonometric);
    CHECK(rep.denominators[0] == doctest::Approx(0.8 * 0.5 * 0.2 * 0.5).epsilon(1e-14));
}

TEST_CASE("lambda_theta: zero gamma gives theta = pi/2") {
    ModelSpec m = testing::model_m0();
    m.cbar_given_a1 = m.c_given_a1;
    m.chat_given_a2 = m.c_given_a2;
    const auto rep = lambda_theta(m);
    CHECK(*rep.lambda[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(*rep.theta[0] == doctest::Approx(pi / 2).epsilon(1e-12));
}

TEST_CASE("lambda_theta: zero denominator is an explicit undefined state") {
    ModelSpec m = testing::model_m0();
    m.cbar_given_a1.p_c1_given = 0.0;
    const auto rep = lambda_theta(m);
    CHECK(rep.regime[0] == Regime::undefined);
    CHECK_FALSE(rep.lambda[0].has_value());
    CHECK_FALSE(rep.theta[0].has_value());
}

TEST_CASE("classical_design solves the zero-interference decomposition") {
    // p_a1 = 0.3, p_c = 0.5: interval is [0, 1], t = 0.4 places pbar at 0.4
    const auto [pbar, phat] = classical_design(0.3, 0.5, 0.4);
    CHECK(pbar == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(phat == doctest::Approx(19.0 / 35).epsilon(1e-12));
    CHECK(pbar * 0.3 + phat * 0.7 == doctest::Approx(0.5).epsilon(1e-12));

    // boundary cases collapse the interval
    CHECK(classical_design(0.3, 0.0, 0.7) == std::pair{0.0, 0.0});
    const auto [b1, b2] = classical_design(0.5, 1.0, 0.2);
    CHECK(b1 == 1.0);
    CHECK(b2 == 1.0);
}

TEST_CASE("classical_design output has zero gamma over a dense grid") {
    for (int ia = 1; ia < 20; ++ia) {
        for (int ic = 0; ic <= 20; ++ic) {
            for (int it = 0; it <= 10; ++it) {
                const double pa1 = ia / 20.0;
                const double pc = ic / 20.0;
                const auto [pbar, phat] = classical_design(pa1, pc, it / 10.0);
                CHECK(pbar >= 0.0);
                CHECK(pbar <= 1.0);
                CHECK(phat >= 0.0);
                CHECK(phat <= 1.0);
                CHECK(std::abs(pc - pbar * pa1 - phat * (1 - pa1)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("regime_equivalences on the reference model values") {
    const auto chk = regime_equivalences(0.5, 0.7, 0.8, 0.2);
    CHECK(chk.t1 == doctest::Approx(std::sqrt(0.4)).epsilon(1e-14));
    CHECK(chk.t2 == doctest::Approx(std::sqrt(0.1)).epsilon(1e-14));
    CHECK(chk.lambda == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(chk.upper_equivalence);
    CHECK(chk.lower_equivalence);
    CHECK_THROWS_AS(regime_equivalences(0.5, 0.7, 0.0, 0.2), ZeroDenominator);
}

TEST_CASE("regime_equivalences hold across a coarse grid") {
    for (int ia = 1; ia < 11; ++ia) {
        for (int ic = 0; ic <= 10; ++ic) {
            for (int ib = 1; ib <= 10; ++ib) {
                for (int ih = 1; ih <= 10; ++ih) {
                    const auto chk = regime_equivalences(ia / 11.0, ic / 10.0,
                                                         ib / 10.0, ih / 10.0);
                    CHECK(chk.upper_equivalence);
                    CHECK(chk.lower_equivalence);
                }
            }
        }
    }
}

TEST_CASE("perturbation_interval arithmetic") {
    const auto iv = perturbation_interval(0.9, 0.5);
    CHECK(iv.lo == doctest::Approx(0.3125).epsilon(1e-14));
    CHECK(iv.hi == 1.0);
    CHECK(iv.upper_capped);  // uncapped endpoint would be 1.25

    const auto sym = perturbation_interval(0.5, 0.4);
    CHECK(sym.hi == 1.0);
    CHECK(sym.upper_capped);

    const auto zero = perturbation_interval(0.9, 0.0);
    CHECK(zero.lo == 0.0);
    CHECK(zero.hi == 0.0);
    CHECK_FALSE(zero.upper_capped);
}

TEST_CASE("perturbation_interval agrees with lambda_theta on sampled points") {
    const auto iv = perturbation_interval(0.9, 0.5);
    for (int i = 0; i < 50; ++i) {
        const double inside = iv.lo + (i + 0.5) / 50.0 * (iv.hi - iv.lo);
        const auto rep = lambda_theta(testing::independent_case_model(0.9, 0.5, inside, inside));
        REQUIRE(rep.lambda[0].has_value());
        CHECK(std::abs(*rep.lambda[0]) <= 1.0 + 1e-12);
    }
    for (int i = 0; i < 50; ++i) {
        const double outside = 0.01 + (i / 50.0) * (iv.lo - 0.02);
        const auto rep = lambda_theta(testing::independent_case_model(0.9, 0.5, outside, outside));
        REQUIRE(rep.lambda[0].has_value());
        CHECK(std::abs(*rep.lambda[0]) > 1.0);
    }
}

TEST_CASE("two_slit_prob values and validity flag") {
    CHECK(two_slit_prob(0.5, 0.5, pi / 2).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(two_slit_prob(0.5, 0.5, pi / 2).valid);
    CHECK(two_slit_prob(0.5, 0.5, 2 * pi / 3).value == doctest::Approx(0.5).epsilon(1e-12));
    const auto out = two_slit_prob(0.5, 0.5, 0.0);
    CHECK(out.value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_FALSE(out.valid);
}

TEST_CASE("tpf_eval reproduces the marginal on the reference model") {
    const auto v = tpf_eval(0.8, 0.2, 0.5, 0.5, pi / 3);
    CHECK(v.value == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(v.valid);
    // cos(theta) = 0 is the classical total probability value
    CHECK(tpf_eval(0.8, 0.2, 0.5, 0.5, pi / 2).value ==
          doctest::Approx(0.8 * 0.5 + 0.2 * 0.5).epsilon(1e-12));
    // equal conditionals and priors at theta = pi cancel exactly
    CHECK(tpf_eval(0.6, 0.6, 0.5, 0.5, pi).value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(tpf_eval(1.2, 0.2, 0.5, 0.5, 0.0), RangeError);
    CHECK_THROWS_AS(tpf_eval(0.5, 0.5, 0.7, 0.2, 0.0), RangeError);
}

TEST_CASE("trigonometric-regime round trip through tpf_eval") {
    CounterStream rng({13, 0});
    int tested = 0;
    while (tested < 200) {
        const ModelSpec m = testing::random_model(rng);
        const auto rep = lambda_theta(m);
        if (rep.regime[0] != Regime::trigonometric) continue;
        const auto v = tpf_eval(m.cbar_given_a1.p_c1_given, m.chat_given_a2.p_c1_given,
                                m.a_law.p_1, 1.0 - m.a_law.p_1, *rep.theta[0]);
        CHECK(std::abs(v.value - marginal_c(m)[0]) <= 1e-12);
        ++tested;
    }
}
