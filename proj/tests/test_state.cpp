#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cfqsim/state.hpp"
#include "doctest.h"

namespace {

using namespace cfqsim;

double test_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

TEST_CASE("rotation examples") {
    const TwoModeState fresh;
    CHECK(fresh.alice_amp == 1.0);
    CHECK(fresh.channel_amp == 0.0);

    const TwoModeState identity = rotate(fresh, 0.0);
    CHECK(identity.alice_amp == 1.0);
    CHECK(identity.channel_amp == 0.0);

    const TwoModeState quarter = rotate(fresh, std::numbers::pi / 2.0);
    CHECK(std::fabs(quarter.alice_amp) < 1e-15);
    CHECK(std::fabs(quarter.channel_amp - 1.0) < 1e-15);

    const TwoModeState rotated = rotate({0.6, 0.8}, std::numbers::pi / 4.0);
    CHECK(rotated.alice_amp == doctest::Approx(-0.1414213562373095).epsilon(1e-12));
    CHECK(rotated.channel_amp == doctest::Approx(0.98994949366116658).epsilon(1e-12));
}

TEST_CASE("rotation preserves norm and composes") {
    std::mt19937_64 rng(20260822);
    for (int i = 0; i < 500; ++i) {
        const double phi = 2.0 * std::numbers::pi * test_uniform(rng);
        const TwoModeState s{std::cos(phi), std::sin(phi)};
        const double a = 3.0 * (test_uniform(rng) - 0.5);
        const double b = 3.0 * (test_uniform(rng) - 0.5);

        const TwoModeState once = rotate(s, a);
        CHECK(std::fabs(once.norm_sq() - s.norm_sq()) < 1e-14);

        const TwoModeState twice = rotate(once, b);
        const TwoModeState direct = rotate(s, a + b);
        CHECK(std::fabs(twice.alice_amp - direct.alice_amp) < 1e-12);
        CHECK(std::fabs(twice.channel_amp - direct.channel_amp) < 1e-12);
    }
}

TEST_CASE("attenuation examples and bookkeeping") {
    const auto lossless = attenuate_channel({0.8, 0.6}, 1.0);
    CHECK(lossless.state.alice_amp == 0.8);
    CHECK(lossless.state.channel_amp == 0.6);
    CHECK(lossless.absorbed_prob == 0.0);

    const auto blocked = attenuate_channel({0.8, 0.6}, 0.0);
    CHECK(blocked.state.channel_amp == 0.0);
    CHECK(blocked.absorbed_prob == doctest::Approx(0.36).epsilon(1e-14));

    const auto half = attenuate_channel({0.0, 1.0}, 0.5);
    CHECK(half.state.channel_amp == 0.5);
    CHECK(half.absorbed_prob == doctest::Approx(0.75).epsilon(1e-14));

    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const TwoModeState s{test_uniform(rng), test_uniform(rng)};
        const double c = test_uniform(rng);
        const auto result = attenuate_channel(s, c);
        const double in = s.norm_sq();
        CHECK(std::fabs(result.state.norm_sq() + result.absorbed_prob - in) <=
              1e-15 * (1.0 + in));
    }
}

TEST_CASE("detection reads squared amplitudes") {
    const auto pure_alice = detect({1.0, 0.0});
    CHECK(pure_alice.d1 == 1.0);
    CHECK(pure_alice.d2 == 0.0);

    const auto pure_channel = detect({0.0, 1.0});
    CHECK(pure_channel.d1 == 0.0);
    CHECK(pure_channel.d2 == 1.0);

    const auto mixed = detect({0.6, 0.8});
    CHECK(mixed.d1 == doctest::Approx(0.36).epsilon(1e-14));
    CHECK(mixed.d2 == doctest::Approx(0.64).epsilon(1e-14));
    CHECK(mixed.d1 + mixed.d2 == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("three-mode rotations touch only their pair") {
    const ThreeModeState fresh;
    const ThreeModeState outer = rotate_outer(fresh, std::numbers::pi / 6.0);
    CHECK(outer.channel_amp == 0.0);
    CHECK(std::fabs(outer.norm_sq() - 1.0) < 1e-14);

    const ThreeModeState inner = rotate_inner(outer, std::numbers::pi / 3.0);
    CHECK(inner.outer_amp == outer.outer_amp);
    CHECK(std::fabs(inner.norm_sq() - 1.0) < 1e-14);

    ThreeModeState drained = inner;
    const double removed = drain_channel(drained);
    CHECK(drained.channel_amp == 0.0);
    CHECK(removed == doctest::Approx(inner.channel_amp * inner.channel_amp));
    CHECK(std::fabs(drained.norm_sq() + removed - inner.norm_sq()) < 1e-14);
}

TEST_CASE("invalid inputs are rejected") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(rotate({nan, 0.0}, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(rotate({0.0, inf}, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(rotate({1.0, 0.0}, nan), std::invalid_argument);
    CHECK_THROWS_AS(attenuate_channel({1.0, 0.0}, -0.1), std::domain_error);
    CHECK_THROWS_AS(attenuate_channel({1.0, 0.0}, 1.1), std::domain_error);
}
