#pragma once

#include <cstdint>
#include <vector>

#include "cfqsim/chain.hpp"

namespace cfqsim {

enum class Protocol { Improved, Slaz };

enum class BobBit { Pass, Block };  // Pass encodes logic 0, Block logic 1

// Per-outer-cycle noise indicators: entry i is true when the channel segment
// of cycle i+1 is obstructed. Length must equal the cycle count of the run.
using NoiseMask = std::vector<bool>;

// Per-channel-traversal noise indicators for the nested baseline: entry
// k covers inner step (k mod N) of outer cycle (k div N), length M*N.
using SegmentMask = std::vector<std::uint8_t>;

// Probability mass per terminal outcome. d3_module aggregates the module /
// inner detectors, d4_bob is Bob's absorber, noise_absorbed collects mass
// removed by channel obstructions.
struct DetectorDist {
    double d1 = 0.0;
    double d2 = 0.0;
    double d3_module = 0.0;
    double d4_bob = 0.0;
    double noise_absorbed = 0.0;

    double total() const { return d1 + d2 + d3_module + d4_bob + noise_absorbed; }
};

// Counterfactuality pair: c0 for transmitted 0s (Bob passing), c1 for
// transmitted 1s (Bob blocking). Abnormality is the complement.
struct CounterfactualityVec {
    double c0;
    double c1;

    double a0() const { return 1.0 - c0; }
    double a1() const { return 1.0 - c1; }
};

// Outer beam-splitter angle pi / (2 cycles), so the rotations of a clean run
// sum to a quarter turn.
double theta_of(int cycles);

struct ImprovedParams {
    int cycles;          // outer-cycle count M
    ChainModule module;  // chain guarding the channel end
    double theta;        // pi / (2 cycles)

    explicit ImprovedParams(int cycles_);
    ImprovedParams(int cycles_, ChainModule module_);
};

struct SlazParams {
    int outer_cycles;   // M
    int inner_cycles;   // N, channel traversals per outer cycle
    double theta_outer; // pi / (2 M)
    double theta_inner; // pi / (2 N)

    SlazParams(int outer, int inner);
};

// Probability that a blocked bit is read correctly while the photon never
// entered the channel: cos^{2M}(pi / 2M). Increases toward 1 with M.
double improved_c1(int cycles);

// Probability that a passed bit involved no channel occupation in any cycle:
// prod_{m=1..M} (1 - sin^2(m theta) t) for module transmission t.
double improved_c0(int cycles, double transmission);

CounterfactualityVec counterfactuality_improved(const ImprovedParams& params);

// Steps the outer interferometer through M cycles of rotate-then-segment.
// A segment obstructed by noise (mask true) attenuates the channel amplitude
// by return rate c and books the absorbed mass to noise_absorbed; with Bob
// blocking, an unmasked segment books the absorbed mass to d4_bob and
// d3_module in the module's transmitted/remainder split. Detection after the
// final segment: d1 reads the alice arm, d2 the channel arm.
DetectorDist improved_run(const ImprovedParams& params, BobBit bob,
                          const NoiseMask& mask, double return_rate);

// Closed form for the d2 mass when exactly one segment, at cycle i, is
// obstructed during a pass run: (1 - (1 - c) sin(i theta) cos((M - i) theta))^2.
double improved_single_block_d2(int cycles, int blocked_cycle, double return_rate);

// Nested-baseline engine with per-outer-cycle noise. Each cycle rotates
// (outer, inner) by theta_outer, then runs N inner steps rotating
// (inner, channel) by theta_inner. In a blocked cycle (Bob or mask) every
// inner step empties the channel arm into d4_bob / noise_absorbed; in a pass
// cycle the channel arm accumulates and drains into d3_module once at cycle
// end. Detection after cycle M: d1 reads outer, d2 reads inner.
DetectorDist slaz_run(const SlazParams& params, BobBit bob, const NoiseMask& mask);

// Same engine with the noise resolved per channel traversal; segment k of a
// pass cycle empties the channel arm right after its rotation when masked.
// Expanding a per-cycle mask to N identical entries reproduces slaz_run.
DetectorDist slaz_run_segments(const SlazParams& params, BobBit bob,
                               const SegmentMask& mask);

// Correct-readout probabilities of the nested baseline on a clean run:
// p1 = cos^{2M}(pi / 2M) for a pass, p2 for a block via the collapsed
// per-cycle recursion (rotation by theta_outer, inner damping cos^N theta_inner).
double slaz_p1(int outer_cycles);
double slaz_p2(int outer_cycles, int inner_cycles);

// Total channel length a photon component traverses per transmitted bit:
// M*L for the improved protocol, M*N*L for the nested baseline.
double equivalent_distance(Protocol protocol, int outer_cycles, int inner_cycles,
                           double channel_length);

}  // namespace cfqsim
