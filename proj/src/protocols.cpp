#include "cfqsim/protocols.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cfqsim/state.hpp"

namespace cfqsim {

namespace {

void require_cycles(int cycles, const char* what) {
    if (cycles < 1) {
        throw std::invalid_argument(std::string(what) + " requires a cycle count >= 1");
    }
}

}  // namespace

double theta_of(int cycles) {
    require_cycles(cycles, "theta_of");
    return std::numbers::pi / (2.0 * static_cast<double>(cycles));
}

ImprovedParams::ImprovedParams(int cycles_)
    : ImprovedParams(cycles_, ChainModule(std::vector<double>{1.0})) {}

ImprovedParams::ImprovedParams(int cycles_, ChainModule module_)
    : cycles(cycles_), module(std::move(module_)), theta(theta_of(cycles_)) {}

SlazParams::SlazParams(int outer, int inner)
    : outer_cycles(outer),
      inner_cycles(inner),
      theta_outer(theta_of(outer)),
      theta_inner(theta_of(inner)) {
    require_cycles(inner, "SlazParams");
}

double improved_c1(int cycles) {
    const double c = std::cos(theta_of(cycles));
    return std::pow(c, 2.0 * static_cast<double>(cycles));
}

double improved_c0(int cycles, double transmission) {
    require_cycles(cycles, "improved_c0");
    if (!(transmission >= 0.0 && transmission <= 1.0)) {
        throw std::domain_error("transmission must lie in [0, 1]");
    }
    const double theta = theta_of(cycles);
    double prod = 1.0;
    for (int m = 1; m <= cycles; ++m) {
        const double s = std::sin(static_cast<double>(m) * theta);
        prod *= 1.0 - s * s * transmission;
    }
    return prod;
}

CounterfactualityVec counterfactuality_improved(const ImprovedParams& params) {
    return CounterfactualityVec{
        improved_c0(params.cycles, params.module.total_transmission()),
        improved_c1(params.cycles)};
}

DetectorDist improved_run(const ImprovedParams& params, BobBit bob,
                          const NoiseMask& mask, double return_rate) {
    if (static_cast<int>(mask.size()) != params.cycles) {
        throw std::invalid_argument("noise mask length must equal the cycle count");
    }
    if (!(return_rate >= 0.0 && return_rate <= 1.0)) {
        throw std::domain_error("return rate c must lie in [0, 1]");
    }
    const double transmission = params.module.total_transmission();

    DetectorDist dist;
    TwoModeState state;
    for (int m = 0; m < params.cycles; ++m) {
        state = rotate(state, params.theta);
        const bool by_noise = mask[static_cast<std::size_t>(m)];
        if (by_noise || bob == BobBit::Block) {
            auto [attenuated, absorbed] = attenuate_channel(state, return_rate);
            state = attenuated;
            if (by_noise) {
                dist.noise_absorbed += absorbed;
            } else {
                dist.d4_bob += absorbed * transmission;
                dist.d3_module += absorbed * (1.0 - transmission);
            }
        }
    }
    const DetectionProbs probs = detect(state);
    dist.d1 = probs.d1;
    dist.d2 = probs.d2;
    return dist;
}

double improved_single_block_d2(int cycles, int blocked_cycle, double return_rate) {
    require_cycles(cycles, "improved_single_block_d2");
    if (blocked_cycle < 1 || blocked_cycle > cycles) {
        throw std::invalid_argument("blocked cycle index out of range");
    }
    const double theta = theta_of(cycles);
    const double amp =
        1.0 - (1.0 - return_rate) * std::sin(blocked_cycle * theta) *
                  std::cos((cycles - blocked_cycle) * theta);
    return amp * amp;
}

DetectorDist slaz_run(const SlazParams& params, BobBit bob, const NoiseMask& mask) {
    if (static_cast<int>(mask.size()) != params.outer_cycles) {
        throw std::invalid_argument("noise mask length must equal the outer-cycle count");
    }
    DetectorDist dist;
    ThreeModeState state;
    for (int m = 0; m < params.outer_cycles; ++m) {
        state = rotate_outer(state, params.theta_outer);
        const bool by_noise = mask[static_cast<std::size_t>(m)];
        const bool blocked = by_noise || bob == BobBit::Block;
        for (int k = 0; k < params.inner_cycles; ++k) {
            state = rotate_inner(state, params.theta_inner);
            if (blocked) {
                const double mass = drain_channel(state);
                if (by_noise) {
                    dist.noise_absorbed += mass;
                } else {
                    dist.d4_bob += mass;
                }
            }
        }
        dist.d3_module += drain_channel(state);
    }
    dist.d1 = state.outer_amp * state.outer_amp;
    dist.d2 = state.inner_amp * state.inner_amp;
    return dist;
}

DetectorDist slaz_run_segments(const SlazParams& params, BobBit bob,
                               const SegmentMask& mask) {
    const std::size_t segments = static_cast<std::size_t>(params.outer_cycles) *
                                 static_cast<std::size_t>(params.inner_cycles);
    if (mask.size() != segments) {
        throw std::invalid_argument(
            "segment mask length must equal outer cycles times inner cycles");
    }
    const double co = std::cos(params.theta_outer);
    const double so = std::sin(params.theta_outer);
    const double ci = std::cos(params.theta_inner);
    const double si = std::sin(params.theta_inner);
    const bool bob_blocks = bob == BobBit::Block;

    DetectorDist dist;
    double outer = 1.0;
    double inner = 0.0;
    double channel = 0.0;
    const std::uint8_t* seg = mask.data();
    for (int m = 0; m < params.outer_cycles; ++m) {
        const double rotated = outer * co - inner * so;
        inner = outer * so + inner * co;
        outer = rotated;
        for (int k = 0; k < params.inner_cycles; ++k, ++seg) {
            const double u = inner * ci - channel * si;
            channel = inner * si + channel * ci;
            inner = u;
            if (*seg) {
                dist.noise_absorbed += channel * channel;
                channel = 0.0;
            } else if (bob_blocks) {
                dist.d4_bob += channel * channel;
                channel = 0.0;
            }
        }
        dist.d3_module += channel * channel;
        channel = 0.0;
    }
    dist.d1 = outer * outer;
    dist.d2 = inner * inner;
    return dist;
}

double slaz_p1(int outer_cycles) {
    return improved_c1(outer_cycles);
}

double slaz_p2(int outer_cycles, int inner_cycles) {
    const double theta_m = theta_of(outer_cycles);
    const double theta_n = theta_of(inner_cycles);
    const double cm = std::cos(theta_m);
    const double sm = std::sin(theta_m);
    const double damping = std::pow(std::cos(theta_n), static_cast<double>(inner_cycles));
    double a = 1.0;
    double b = 0.0;
    for (int m = 0; m < outer_cycles; ++m) {
        const double next_a = a * cm - b * sm;
        b = (a * sm + b * cm) * damping;
        a = next_a;
    }
    return b * b;
}

double equivalent_distance(Protocol protocol, int outer_cycles, int inner_cycles,
                           double channel_length) {
    require_cycles(outer_cycles, "equivalent_distance");
    if (!(channel_length > 0.0)) {
        throw std::domain_error("channel length must be positive");
    }
    if (protocol == Protocol::Improved) {
        return static_cast<double>(outer_cycles) * channel_length;
    }
    require_cycles(inner_cycles, "equivalent_distance");
    return static_cast<double>(outer_cycles) * static_cast<double>(inner_cycles) *
           channel_length;
}

}  // namespace cfqsim
