#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "relaydde/error.hpp"
#include "relaydde/exact.hpp"
#include "relaydde/maps.hpp"

using namespace relaydde;

TEST_SUITE("maps") {

TEST_CASE("type I map examples") {
    // m = 2 a2/a1 - 1, b = a1 (p1 - 2) + a2 (6 - 2 p1 - p2), evaluated by hand
    const AffineMap1D g = type1_map({1, 0.25, 2.5, 1.5});
    CHECK(g.slope == doctest::Approx(-0.5));
    CHECK(-g.intercept == doctest::Approx(0.375));
    CHECK(type1_fixed_point({1, 0.25, 2.5, 1.5}) == doctest::Approx(-0.25));

    CHECK(type1_m({2, 2, 2.5, 1.5}) == 1.0);
    CHECK(type1_m({1, 6, 3, 1}) == doctest::Approx(11));
    CHECK(type1_b({1, 6, 3, 1}) == doctest::Approx(-5));
    CHECK(type1_fixed_point({1, 6, 3, 1}) == doctest::Approx(-0.5));
}

TEST_CASE("type I fixed points") {
    const double s = type1_fixed_point({std::sqrt(10.0), 1 / std::sqrt(5.0), std::numbers::pi, std::numbers::e + 1});
    CHECK(std::abs(s - -1.0602) <= 5e-5);
    CHECK(type1_fixed_point({3, 7, 4, 1}) == doctest::Approx(-5.625).epsilon(1e-14));
    CHECK(std::abs(type1_fixed_point({2, 0.25, 2.5, 1}) - -4.0 / 7.0) <= 1e-15);
    try {
        type1_fixed_point({2, 2, 2.5, 1.5});
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MIsOne);
    }
}

TEST_CASE("type II map examples") {
    const Type2Maps a = type2_map({4, 1, 0.5, 2.5});
    CHECK(a.k == doctest::Approx(0.5));
    CHECK(a.d == doctest::Approx(0.5));
    const Type2Maps b = type2_map({6, 1, 1, 3});
    CHECK(b.k == doctest::Approx(2.0 / 3.0));
    CHECK(b.d == doctest::Approx(3.0));
    CHECK(type2_two_cycle({6, 1, 1, 3}).first == doctest::Approx(-1.8));
    CHECK(type2_map({2, 2, 1, 3}).k == -1.0);
}

TEST_CASE("apply_F") {
    CHECK(apply_F(-1.0 / 3.0, 0.5, 0.5) == doctest::Approx(1.0 / 3.0));
    CHECK(apply_F(1.0 / 3.0, 0.5, 0.5) == doctest::Approx(-1.0 / 3.0));
    CHECK(apply_F(-1.0, -9.0, 2.0) == 11.0);
    try {
        apply_F(0.0, 0.5, 0.5);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::HZero);
    }
}

TEST_CASE("two-cycles") {
    const auto c = type2_two_cycle({4, 1, 0.5, 2.5});
    CHECK(c.first == doctest::Approx(-1.0 / 3.0));
    CHECK(c.second == doctest::Approx(1.0 / 3.0));
    CHECK(type2_two_cycle({7, 2.5, 2, 3}).first == doctest::Approx(-7.0 / 6.0));
    try {
        type2_two_cycle({1, 5, 4, 1});
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoCycle);
    }
}

TEST_CASE("basin") {
    CHECK(basin({4, 1, 0.5, 2.5}).kind == BasinDescriptor::Kind::AllNonzero);
    const Params p{1.5, 1, 1, 1};
    const Type2Maps m = type2_map(p);
    REQUIRE(m.d > 0);
    const BasinDescriptor bd = basin(p);
    CHECK(bd.kind == BasinDescriptor::Kind::Interval);
    CHECK(bd.radius == doctest::Approx(3 * m.d));
    try {
        basin({1, 5, 4, 1});
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotApplicable);
    }
}

TEST_CASE("classify examples") {
    const Classification a = classify({1, 0.25, 2.5, 1.5});
    CHECK(a.kind == SolutionKind::StableT);
    CHECK(a.h_star == doctest::Approx(-0.25));
    CHECK(a.period == 4);
    CHECK(a.validated);

    const Classification b = classify({1, 5, 4, 1});
    CHECK(b.kind == SolutionKind::UnstableT);
    CHECK(b.h_star == doctest::Approx(-1.625));
    CHECK(b.period == 5);

    const Classification c = classify({5, 1, 0.5, 3});
    CHECK(c.kind == SolutionKind::Stable2T);
    CHECK(c.h_star == doctest::Approx(-0.3125));
    CHECK(c.period == 7);

    const Classification d = classify({2, 2, 2.5, 1.5});
    CHECK(d.kind == SolutionKind::ShapeInvalid);
    CHECK(d.boundary);

    // a1 < a2 with d > 0: the Type II branch diverges
    bool diverges = false;
    for (const auto& v : classify({1, 5, 4, 1}).verdicts) diverges |= v.kind == SolutionKind::Diverges2T;
    CHECK(diverges);
}

TEST_CASE("dual params") {
    CHECK(dual_params({1, 6, 3, 1}) == Params{6, 1, 1, 3});
    CHECK(dual_params({0.5, 7, 3, 2}) == Params{7, 0.5, 2, 3});
    CHECK(type2_two_cycle(dual_params({0.5, 7, 3, 2})).first == doctest::Approx(-6.1923).epsilon(1e-4));
}

TEST_CASE("orbit closure check") {
    CHECK(check_orbit_closure({1, 0.25, 2.5, 1.5}, -0.25, 1).closure_ok);
    CHECK(check_orbit_closure({1, 0.25, 2.5, 1.5}, -0.25, 1).shape_ok);
    CHECK_FALSE(check_orbit_closure({1, 0.25, 2.5, 1.5}, -0.3, 1).closure_ok);
    CHECK(check_orbit_closure({4, 1, 0.5, 2.5}, -1.0 / 3.0, 2).closure_ok);
    CHECK_FALSE(check_orbit_closure({4, 1, 0.5, 2.5}, 0.0, 2).closure_ok);
}

TEST_CASE("property: range constraints of m and k") {
    oracle::ParamGen gen(31);
    for (int i = 0; i < 2000; ++i) {
        const Params p = gen.params(0.01, 20, 0.5, 4);
        const double m = type1_m(p);
        const double k = type2_map(p).k;
        CHECK(m > -1);
        CHECK(k < 1);
        if (p.a2 < p.a1) {
            CHECK(std::abs(m) < 1);
            CHECK(std::abs(k) < 1);
        } else if (p.a2 > p.a1) {
            CHECK(m > 1);
            CHECK(k < -1);
        }
    }
}

TEST_CASE("property: fixed-point consistency and composition") {
    oracle::ParamGen gen(32);
    for (int i = 0; i < 1000; ++i) {
        const Params p = gen.params();
        if (p.a1 != p.a2) {
            const double h = type1_fixed_point(p);
            CHECK(type1_map(p)(h) == doctest::Approx(h).epsilon(1e-12));
        }
        const Type2Maps m = type2_map(p);
        if (std::abs(m.k) < 1 && m.d > 0) {
            const auto [lo, hi] = type2_two_cycle(p);
            CHECK(lo < 0);
            CHECK(m.f1()(lo) == doctest::Approx(-lo).epsilon(1e-12));
            CHECK(m.f2()(hi) == doctest::Approx(-hi).epsilon(1e-12));
        }
        const double h = gen.uniform(-5, -0.01);
        if (m.f1()(h) > 0) {
            CHECK(m.f2()(m.f1()(h)) == doctest::Approx(m.k * m.k * h + (m.k - 1) * m.d).epsilon(1e-12));
            CHECK(m.through()(h) == doctest::Approx(m.k * m.k * h + (m.k - 1) * m.d).epsilon(1e-12));
        }
    }
}

TEST_CASE("property: contraction of F0 and geometric convergence") {
    oracle::ParamGen gen(33);
    int tested = 0;
    for (int i = 0; i < 200; ++i) {
        const Params p = gen.params();
        const Type2Maps m = type2_map(p);
        if (!(std::abs(m.k) < 1 && m.d > 0 && std::abs(m.k) > 0.05)) continue;
        ++tested;
        const double hs = type2_two_cycle(p).first;
        const double h1 = gen.uniform(-3, -0.01), h2 = gen.uniform(-3, -0.01);
        const AffineMap1D f0 = m.through();
        CHECK(std::abs(f0(h1) - f0(h2)) == doctest::Approx(m.k * m.k * std::abs(h1 - h2)).epsilon(1e-9));
        double h = h1;
        double e0 = std::abs(h - hs);
        h = apply_F(apply_F(h, m.k, m.d), m.k, m.d);
        const double e1 = std::abs(h - hs);
        if (e0 > 1e-6 && m.f1()(h1) > 0) CHECK(e1 / e0 == doctest::Approx(m.k * m.k).epsilon(1e-6));
    }
    CHECK(tested > 20);
}

TEST_CASE("property: divergence when k < -1") {
    oracle::ParamGen gen(34);
    for (int i = 0; i < 500; ++i) {
        const Params p = gen.params();
        const Type2Maps m = type2_map(p);
        if (!(m.k < -1 && m.d > 0)) continue;
        const double h = (gen.uniform(0, 1) < 0.5 ? -1 : 1) * gen.uniform(0.01, 5);
        double x = h;
        for (int n = 0; n < 4; ++n) x = apply_F(x, m.k, m.d);
        CHECK(std::abs(x) > std::abs(h));
    }
}

TEST_CASE("property: validated verdicts close under exact propagation") {
    oracle::ParamGen gen(35);
    int validated = 0;
    for (int i = 0; i < 500; ++i) {
        const Params p = gen.params();
        for (const Verdict& v : classify(p).verdicts) {
            if (!v.validated) continue;
            ++validated;
            const PiecewisePath path = propagate(p, {v.h_star}, v.period);
            CHECK(std::abs(path.value_at(v.period) - v.h_star) <= 1e-9 * std::max(1.0, std::abs(v.h_star)));
        }
    }
    CHECK(validated > 50);
}

TEST_CASE("property: stable T and unstable T never share a cell") {
    oracle::ParamGen gen(36);
    for (int i = 0; i < 1000; ++i) {
        const Classification c = classify(gen.params());
        CHECK_FALSE((c.has_validated(SolutionKind::StableT) && c.has_validated(SolutionKind::UnstableT)));
    }
}

}  // TEST_SUITE
