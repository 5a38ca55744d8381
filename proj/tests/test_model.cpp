#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "relaydde/error.hpp"
#include "relaydde/model.hpp"

using namespace relaydde;

TEST_SUITE("model") {

TEST_CASE("params validation names the field") {
    CHECK_NOTHROW(Params{1, 6, 3, 1}.validate());
    try {
        Params{1, -6, 3, 1}.validate();
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
        CHECK(e.field() == "a2");
    }
    try {
        Params{1, 1, 0.4, 0.5}.validate();
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
    }
    CHECK_THROWS_AS((Params{1, 1, std::nan(""), 2}.validate()), Error);
}

TEST_CASE("smoothing validation") {
    const Params p{1, 6, 3, 1};
    CHECK_NOTHROW(SmoothingSpec{0.0}.validate(p));
    CHECK_NOTHROW(SmoothingSpec{0.49}.validate(p));
    CHECK_THROWS_AS(SmoothingSpec{0.5}.validate(p), Error);
    CHECK_THROWS_AS(SmoothingSpec{-0.1}.validate(p), Error);
    CHECK_THROWS_AS(SmoothingSpec{1.0}.validate(Params{1, 1, 5, 5}), Error);
}

TEST_CASE("coefficient examples") {
    const Params p{1, 6, 3, 1};
    CHECK(coefficient_value(1.0, p, {}) == 1.0);
    CHECK(coefficient_value(4.2, p, {}) == 1.0);
    CHECK(coefficient_value(3.5, p, {}) == 6.0);
    CHECK(coefficient_value(-0.5, p, {}) == 6.0);
    CHECK(coefficient_value(3.0, p, {0.1}) == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(coefficient_value(0.0, p, {0.1}) == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(coefficient_value(4.0, p, {0.1}) == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(coefficient_value(2.95, p, {0.1}) == doctest::Approx(1.0 + 5.0 * 0.25).epsilon(1e-12));
}

TEST_CASE("nonlinearity examples") {
    for (double d : {0.0, 0.1, 1.0}) CHECK(nonlinearity_value(-2.0, {d}) == 1.0);
    for (double d : {0.0, 0.1}) {
        CHECK(nonlinearity_value(0.0, {d}) == 0.0);
        CHECK(nonlinearity_value(0.0, {d, Profile::SmoothExp}) == 0.0);
    }
    CHECK(nonlinearity_value(0.05, {0.1}) == doctest::Approx(-0.5));
    CHECK(nonlinearity_value(0.1, {0.1, Profile::SmoothExp}) == -1.0);
    CHECK(nonlinearity_value(0.5, {0.1, Profile::SmoothExp}) == -1.0);
    // e^{d x/(x - d)} - 1 at x = d/2 is e^{-d} - 1
    CHECK(nonlinearity_value(0.05, {0.1, Profile::SmoothExp}) == doctest::Approx(std::exp(-0.1) - 1.0));
}

TEST_CASE("oscillation condition examples") {
    CHECK(oscillation_condition({1, 0.25, 2.5, 1.5}, {0.01}));
    CHECK(oscillation_condition({1, 1, 2, 2}, {}));
    // delta = 1 violates the window bound, so only the inequality is checked here
    CHECK_FALSE(0.25 * nonlinearity_slope_at_zero({1.0}) > 1.0 / std::numbers::e);
    CHECK(nonlinearity_slope_at_zero({0.01}) == doctest::Approx(100.0));
    CHECK(nonlinearity_slope_at_zero({0.01, Profile::SmoothExp}) == doctest::Approx(1.0));
    CHECK_FALSE(oscillation_condition({1, 0.25, 2.5, 1.5}, {0.01, Profile::SmoothExp}));
}

TEST_CASE("key-value parsing") {
    const KeyValues kv{{"a1", "1"}, {"a2", "+6"}, {"p1", "3"}, {"p2", "1"}, {"delta", "0.05"}, {"profile", "smoothexp"}};
    CHECK(params_from_key_values(kv) == Params{1, 6, 3, 1});
    const SmoothingSpec s = smoothing_from_key_values(kv);
    CHECK(s.delta == 0.05);
    CHECK(s.profile == Profile::SmoothExp);
    try {
        params_from_key_values({{"a1", "1"}, {"a2", "x"}, {"p1", "3"}, {"p2", "1"}});
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.field() == "a2");
    }
    CHECK_THROWS_AS(params_from_key_values({{"a1", "1"}}), Error);
    CHECK_THROWS_AS(profile_from_string("cubic"), Error);
}

TEST_CASE("property: periodicity of the coefficient") {
    oracle::ParamGen gen(11);
    for (int i = 0; i < 300; ++i) {
        const Params p = gen.params();
        const double delta = gen.uniform(0.0, 0.49) * std::min({p.p1, p.p2, 1.0});
        for (const SmoothingSpec s : {SmoothingSpec{0.0}, SmoothingSpec{delta}}) {
            const double t = gen.uniform(-10, 10);
            CHECK(coefficient_value(t, p, s) == doctest::Approx(coefficient_value(t + p.period(), p, s)).epsilon(1e-12));
            CHECK(coefficient_value(t, p, s) >= std::min(p.a1, p.a2));
            CHECK(coefficient_value(t, p, s) <= std::max(p.a1, p.a2));
        }
        const double t = gen.uniform(0, 30);
        CHECK(coefficient_value(t, p, {}) == oracle::step_coefficient(t, p));
    }
}

TEST_CASE("property: oddness and negative feedback") {
    oracle::ParamGen gen(12);
    for (int i = 0; i < 500; ++i) {
        const double d = gen.uniform(1e-3, 0.9);
        for (Profile prof : {Profile::Affine, Profile::SmoothExp}) {
            const SmoothingSpec s{d, prof};
            for (double x : {gen.uniform(-3, 3), d / 2, d, 10 * d, gen.uniform(-d, d)}) {
                CHECK(nonlinearity_value(-x, s) == -nonlinearity_value(x, s));
                if (x != 0) CHECK(x * nonlinearity_value(x, s) < 0);
            }
        }
        const double x = gen.uniform(-3, 3);
        CHECK(nonlinearity_value(-x, {}) == -nonlinearity_value(x, {}));
        CHECK(nonlinearity_value(x, {}) == oracle::relay(x));
    }
}

TEST_CASE("property: pointwise convergence as delta shrinks") {
    oracle::ParamGen gen(13);
    for (int i = 0; i < 200; ++i) {
        const Params p = gen.params();
        const double x = gen.uniform(-2, 2);
        const double t = gen.uniform(0, 3 * p.period());
        const double T = p.period();
        double s = std::fmod(t, T);
        const double dist_t = std::min({s, std::abs(s - p.p1), T - s});
        const double delta = 0.5 * std::min({std::abs(x), dist_t, 0.49 * std::min(p.p1, p.p2)});
        if (delta <= 0) continue;
        for (Profile prof : {Profile::Affine, Profile::SmoothExp}) {
            CHECK(nonlinearity_value(x, {delta, prof}) == nonlinearity_value(x, {}));
            CHECK(coefficient_value(t, p, {delta, prof}) == coefficient_value(t, p, {}));
        }
    }
}

TEST_CASE("property: continuity of smoothed forms at knots") {
    oracle::ParamGen gen(14);
    const double off = 1e-12;
    for (int i = 0; i < 200; ++i) {
        const Params p = gen.params();
        const double d = gen.uniform(0.01, 0.49) * std::min({p.p1, p.p2, 1.0});
        const double scale = std::max(p.a1, p.a2);
        for (double knot : {-d, d, p.p1 - d, p.p1 + d, p.period() - d, p.period() + d}) {
            const double jump = std::abs(coefficient_value(knot + off, p, {d}) - coefficient_value(knot - off, p, {d}));
            CHECK(jump <= 1e-9 * scale);
        }
        for (Profile prof : {Profile::Affine, Profile::SmoothExp}) {
            for (double knot : {-d, 0.0, d}) {
                const double jump = std::abs(nonlinearity_value(knot + off, {d, prof}) -
                                             nonlinearity_value(knot - off, {d, prof}));
                CHECK(jump <= 1e-9);
            }
        }
    }
}

}  // TEST_SUITE
