#pragma once

#include <map>
#include <string>
#include <string_view>

namespace relaydde {

/// Two-level periodic coefficient: a1 on [0, p1), a2 on [p1, p1 + p2), repeated.
/// The delay is fixed at 1.
struct Params {
    double a1 = 1.0;
    double a2 = 1.0;
    double p1 = 1.0;
    double p2 = 1.0;

    double period() const noexcept { return p1 + p2; }

    /// Throws Error{Validation} naming the first offending field.
    void validate() const;

    bool operator==(const Params&) const = default;
};

enum class Profile { Affine, SmoothExp };

std::string_view to_string(Profile profile) noexcept;
Profile profile_from_string(std::string_view name);

/// delta == 0 selects the discontinuous relay and step coefficient.
struct SmoothingSpec {
    double delta = 0.0;
    Profile profile = Profile::Affine;

    bool smoothed() const noexcept { return delta > 0.0; }

    /// Ramp windows of half-width delta must not overlap: 2*delta < min(p1, p2), delta < 1.
    void validate(const Params& params) const;
};

/// Periodic coefficient a(t). Step function for delta == 0, affine ramps of
/// half-width delta centred on the switch times 0, p1, T otherwise.
double coefficient_value(double t, const Params& params, const SmoothingSpec& smoothing);

/// Feedback nonlinearity f(x): -sign(x) with f(0) = 0, or its smoothed form.
double nonlinearity_value(double x, const SmoothingSpec& smoothing);

/// |f'(0)| for the smoothed nonlinearity (1/delta for Affine, 1 for SmoothExp).
double nonlinearity_slope_at_zero(const SmoothingSpec& smoothing);

/// Sufficient condition for oscillation of all solutions: |f'(0)| * min(a1, a2) > 1/e.
/// Always true for the discontinuous pair.
bool oscillation_condition(const Params& params, const SmoothingSpec& smoothing);

using KeyValues = std::map<std::string, std::string, std::less<>>;

/// Reads a1, a2, p1, p2 from a flat key-value set. Missing or malformed keys
/// raise Error{Validation} naming the key.
Params params_from_key_values(const KeyValues& kv);

/// Reads optional delta (default 0) and profile (default affine).
SmoothingSpec smoothing_from_key_values(const KeyValues& kv);

}  // namespace relaydde
