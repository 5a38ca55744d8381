#include "relaydde/model.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <numbers>

#include "relaydde/error.hpp"

namespace relaydde {

namespace {

void require_positive(double value, const char* field) {
    if (!std::isfinite(value) || value <= 0.0) {
        fail_validation(field, "must be a finite positive number");
    }
}

double parse_double(std::string_view text, const std::string& field) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    // from_chars rejects a leading '+', accept it for convenience
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        fail_validation(field, "not a number: '" + std::string(text) + "'");
    }
    return value;
}

double required(const KeyValues& kv, const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) fail_validation(key, "missing");
    return parse_double(it->second, key);
}

}  // namespace

void Params::validate() const {
    require_positive(a1, "a1");
    require_positive(a2, "a2");
    require_positive(p1, "p1");
    require_positive(p2, "p2");
    if (!(p1 + p2 > 1.0)) {
        fail_validation("p2", "period p1 + p2 must exceed the delay 1");
    }
}

std::string_view to_string(Profile profile) noexcept {
    return profile == Profile::Affine ? "affine" : "smoothexp";
}

Profile profile_from_string(std::string_view name) {
    if (name == "affine") return Profile::Affine;
    if (name == "smoothexp" || name == "smooth-exp" || name == "cinf") return Profile::SmoothExp;
    fail_validation("profile", "expected 'affine' or 'smoothexp', got '" + std::string(name) + "'");
}

void SmoothingSpec::validate(const Params& params) const {
    if (!std::isfinite(delta) || delta < 0.0) {
        fail_validation("delta", "must be a finite nonnegative number");
    }
    if (delta >= 1.0) fail_validation("delta", "must be below the delay 1");
    if (!(2.0 * delta < std::min(params.p1, params.p2))) {
        fail_validation("delta", "ramp windows overlap: need 2*delta < min(p1, p2)");
    }
}

double coefficient_value(double t, const Params& params, const SmoothingSpec& smoothing) {
    const double period = params.period();
    const double r = t - std::floor(t / period) * period;
    const double d = smoothing.delta;
    if (d == 0.0) return r < params.p1 ? params.a1 : params.a2;

    const double slope = (params.a1 - params.a2) / (2.0 * d);
    if (r < d) return params.a2 + slope * (r + d);
    if (r > period - d) return params.a2 + slope * (r - (period - d));
    if (r > params.p1 - d && r < params.p1 + d) return params.a1 - slope * (r - (params.p1 - d));
    return r < params.p1 ? params.a1 : params.a2;
}

double nonlinearity_value(double x, const SmoothingSpec& smoothing) {
    const double d = smoothing.delta;
    if (x == 0.0) return 0.0;
    if (d == 0.0 || std::abs(x) >= d) return x > 0.0 ? -1.0 : 1.0;
    if (smoothing.profile == Profile::Affine) return -x / d;

    // exp(d*u/(u - d)) - 1 on [0, d), reflected oddly onto (-d, 0]
    const double u = std::abs(x);
    const double branch = std::exp(d * u / (u - d)) - 1.0;
    return x > 0.0 ? branch : -branch;
}

double nonlinearity_slope_at_zero(const SmoothingSpec& smoothing) {
    if (!smoothing.smoothed()) return std::numeric_limits<double>::infinity();
    return smoothing.profile == Profile::Affine ? 1.0 / smoothing.delta : 1.0;
}

bool oscillation_condition(const Params& params, const SmoothingSpec& smoothing) {
    params.validate();
    smoothing.validate(params);
    if (!smoothing.smoothed()) return true;
    const double floor_coefficient = std::min(params.a1, params.a2);
    return nonlinearity_slope_at_zero(smoothing) * floor_coefficient > 1.0 / std::numbers::e;
}

Params params_from_key_values(const KeyValues& kv) {
    Params p{required(kv, "a1"), required(kv, "a2"), required(kv, "p1"), required(kv, "p2")};
    p.validate();
    return p;
}

SmoothingSpec smoothing_from_key_values(const KeyValues& kv) {
    SmoothingSpec s;
    if (auto it = kv.find("delta"); it != kv.end()) s.delta = parse_double(it->second, "delta");
    if (auto it = kv.find("profile"); it != kv.end()) s.profile = profile_from_string(it->second);
    return s;
}

}  // namespace relaydde
