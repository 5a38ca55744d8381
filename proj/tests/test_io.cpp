#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "oracle.hpp"
#include "relaydde/error.hpp"
#include "relaydde/io.hpp"

using namespace relaydde;

TEST_SUITE("io") {

TEST_CASE("shortest round-trip formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-0.5) == "-0.5");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
    oracle::ParamGen gen(51);
    for (int i = 0; i < 1000; ++i) {
        const double x = std::ldexp(gen.uniform(-1, 1), static_cast<int>(gen.uniform(-60, 60)));
        CHECK(parse_double(format_double(x), "x") == x);
    }
    CHECK(parse_double("+2.5", "x") == 2.5);
    CHECK_THROWS_AS(parse_double("2.5x", "x"), Error);
    CHECK_THROWS_AS(parse_double("", "x"), Error);
}

TEST_CASE("path csv round trip is byte-identical") {
    oracle::ParamGen gen(52);
    for (int i = 0; i < 50; ++i) {
        const Params p = gen.params();
        const PiecewisePath path = propagate(p, {gen.uniform(-3, -0.01)}, 3 * p.period());
        std::ostringstream first;
        write_path_csv(first, path);
        std::istringstream in(first.str());
        const PiecewisePath back = read_path_csv(in);
        std::ostringstream second;
        write_path_csv(second, back);
        CHECK(first.str() == second.str());
        CHECK(back.history_value() == path.history_value());
        CHECK(back.breakpoints().size() == path.breakpoints().size());
    }
}

TEST_CASE("csv reader rejects malformed input") {
    std::istringstream no_header("0,1\n1,2\n");
    CHECK_THROWS_AS(read_path_csv(no_header), Error);
    std::istringstream bad_number("t,x\n-1,-0.5\n0,-0.5\n1,abc\n");
    CHECK_THROWS_AS(read_path_csv(bad_number), Error);
}

TEST_CASE("dense csv thinning keeps the last node") {
    const DenseSolution s = integrate({1, 6, 3, 1}, {0.05}, -0.5, 4, default_step({0.05}));
    std::ostringstream os;
    write_dense_csv(os, s, 50);
    const std::string text = os.str();
    CHECK(text.rfind("t,x,dx\n", 0) == 0);
    CHECK(text.find("\n4,") != std::string::npos);
    CHECK_THROWS_AS(write_dense_csv(os, s, 0), Error);
}

TEST_CASE("json reports") {
    const auto c = to_json(classify({5, 1, 1, 3.5}));
    CHECK(c["kind"] == "Stable2T");
    CHECK(c["h_star"].get<double>() == doctest::Approx(-0.9375));
    const auto t = to_json(reproduce_tables());
    CHECK(t["total"] == 53);
    CHECK(t["rows"].size() == 53);
    const auto co = to_json(coexistence_report({1, 6, 3, 1}));
    CHECK(co["verified"] == true);
    Classification nan_case;
    nan_case.h_star = std::numeric_limits<double>::quiet_NaN();
    CHECK(to_json(nan_case)["h_star"].is_null());
}

}  // TEST_SUITE
