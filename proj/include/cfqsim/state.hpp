#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace cfqsim {

// Single-photon amplitudes of the outer interferometer: alice_amp rides the
// local arm, channel_amp the transmission-channel arm. Amplitudes are real;
// every transformation in scope is a real rotation or a real scaling.
struct TwoModeState {
    double alice_amp = 1.0;
    double channel_amp = 0.0;

    double norm_sq() const {
        return alice_amp * alice_amp + channel_amp * channel_amp;
    }
};

// Amplitude triple for the nested-interferometer baseline: outer arm,
// inner arm, and the channel arm coupled to the inner beam splitters.
struct ThreeModeState {
    double outer_amp = 1.0;
    double inner_amp = 0.0;
    double channel_amp = 0.0;

    double norm_sq() const {
        return outer_amp * outer_amp + inner_amp * inner_amp +
               channel_amp * channel_amp;
    }
};

struct DetectionProbs {
    double d1;  // alice arm mass
    double d2;  // channel arm mass
};

struct AttenuationResult {
    TwoModeState state;
    double absorbed_prob;
};

namespace detail {

inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string("non-finite amplitude in ") + what);
    }
}

inline void require_unit_interval(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::domain_error(std::string(what) + " must lie in [0, 1]");
    }
}

}  // namespace detail

// Beam-splitter rotation by theta in the (alice, channel) plane:
// (x, y) -> (x cos t - y sin t, x sin t + y cos t). Norm preserving.
inline TwoModeState rotate(const TwoModeState& s, double theta) {
    detail::require_finite(s.alice_amp, "rotate");
    detail::require_finite(s.channel_amp, "rotate");
    detail::require_finite(theta, "rotate angle");
    const double c = std::cos(theta);
    const double n = std::sin(theta);
    return TwoModeState{s.alice_amp * c - s.channel_amp * n,
                        s.alice_amp * n + s.channel_amp * c};
}

// Scales the channel amplitude by c in [0, 1] and reports the absorbed
// probability mass (1 - c^2) y^2, so that norm_sq(out) + absorbed == norm_sq(in).
inline AttenuationResult attenuate_channel(const TwoModeState& s, double c) {
    detail::require_finite(s.alice_amp, "attenuate_channel");
    detail::require_finite(s.channel_amp, "attenuate_channel");
    detail::require_unit_interval(c, "return rate c");
    const double y = s.channel_amp;
    return AttenuationResult{TwoModeState{s.alice_amp, c * y},
                             (1.0 - c * c) * y * y};
}

// Terminal readout: D1 reads the alice arm, D2 the channel arm.
inline DetectionProbs detect(const TwoModeState& s) {
    return DetectionProbs{s.alice_amp * s.alice_amp,
                          s.channel_amp * s.channel_amp};
}

// Outer beam splitter of the nested baseline: couples (outer, inner).
inline ThreeModeState rotate_outer(const ThreeModeState& s, double theta) {
    detail::require_finite(s.outer_amp, "rotate_outer");
    detail::require_finite(s.inner_amp, "rotate_outer");
    detail::require_finite(s.channel_amp, "rotate_outer");
    const double c = std::cos(theta);
    const double n = std::sin(theta);
    return ThreeModeState{s.outer_amp * c - s.inner_amp * n,
                          s.outer_amp * n + s.inner_amp * c, s.channel_amp};
}

// Inner beam splitter of the nested baseline: couples (inner, channel).
inline ThreeModeState rotate_inner(const ThreeModeState& s, double theta) {
    detail::require_finite(s.outer_amp, "rotate_inner");
    detail::require_finite(s.inner_amp, "rotate_inner");
    detail::require_finite(s.channel_amp, "rotate_inner");
    const double c = std::cos(theta);
    const double n = std::sin(theta);
    return ThreeModeState{s.outer_amp, s.inner_amp * c - s.channel_amp * n,
                          s.inner_amp * n + s.channel_amp * c};
}

// Empties the channel arm and returns the removed probability mass.
inline double drain_channel(ThreeModeState& s) {
    const double mass = s.channel_amp * s.channel_amp;
    s.channel_amp = 0.0;
    return mass;
}

}  // namespace cfqsim
