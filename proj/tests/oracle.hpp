// Independent reference computations for the tests. Nothing here calls the
// library's model functions, so a shared mistake cannot hide.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "relaydde/model.hpp"

namespace oracle {

inline double step_coefficient(double t, const relaydde::Params& p) {
    const double T = p.p1 + p.p2;
    double s = std::fmod(t, T);
    if (s < 0) s += T;
    return s < p.p1 ? p.a1 : p.a2;
}

inline double relay(double x) { return x > 0 ? -1.0 : (x < 0 ? 1.0 : 0.0); }

/// Explicit Euler for x' = A0(t) f0(x(t - 1)), x = h on [-1, 0]. The delay is an
/// integer number of steps, so delayed values are grid values.
struct EulerRun {
    double dt;
    std::vector<double> x;  ///< x[n] = x(n dt), n = 0..N
    double at(double t) const {
        const double s = t / dt;
        const auto n = static_cast<std::size_t>(std::floor(s));
        if (n + 1 >= x.size()) return x.back();
        const double w = s - static_cast<double>(n);
        return (1 - w) * x[n] + w * x[n + 1];
    }
};

inline EulerRun euler(const relaydde::Params& p, double h, double t_end, double dt) {
    const auto lag = static_cast<std::size_t>(std::llround(1.0 / dt));
    const auto n_end = static_cast<std::size_t>(std::ceil(t_end / dt));
    EulerRun run{dt, {}};
    run.x.reserve(n_end + 1);
    run.x.push_back(h);
    for (std::size_t n = 0; n < n_end; ++n) {
        const double delayed = n >= lag ? run.x[n - lag] : h;
        run.x.push_back(run.x[n] + dt * step_coefficient(n * dt, p) * relay(delayed));
    }
    return run;
}

/// Hand-rolled generator of valid parameter sets.
struct ParamGen {
    std::mt19937_64 rng;
    explicit ParamGen(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

    relaydde::Params params(double a_lo = 0.25, double a_hi = 4.0, double p_lo = 0.5, double p_hi = 4.0) {
        for (;;) {
            relaydde::Params p{uniform(a_lo, a_hi), uniform(a_lo, a_hi), uniform(p_lo, p_hi), uniform(p_lo, p_hi)};
            if (p.p1 + p.p2 > 1.0) return p;
        }
    }
};

}  // namespace oracle
