#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "cfqsim/protocols.hpp"
#include "cfqsim/rng.hpp"

namespace cfqsim {

// Bernoulli channel-obstruction model: block rate B per exposure, return
// rate c applied to an obstructed segment's channel amplitude.
struct NoiseSpec {
    double block_rate = 0.0;
    double return_rate = 0.0;
};

struct TrialStats {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance
    double stderr_mean = 0.0;
    double ci95_half_width = 0.0;
};

// Resolution of the Bernoulli draws for the nested baseline: one draw per
// channel traversal (M*N exposures) or one per outer cycle (M exposures,
// all N inner segments obstructed together).
enum class SlazNoise { PerSegment, PerOuterCycle };

using ProtocolParams = std::variant<ImprovedParams, SlazParams>;

struct McOptions {
    int workers = 1;
    SlazNoise slaz_noise = SlazNoise::PerSegment;
};

// Draws a length-`count` mask with independent Bernoulli(block_rate) entries.
NoiseMask sample_mask(std::size_t count, double block_rate, TrialStream& stream);

// Per-trial success of a Bob-pass run under sampled noise: the probability
// mass at the correct detector (d2 improved, d1 baseline). Aggregation is a
// serial pass over the per-trial values in trial order, so equal seeds give
// bit-identical stats for any worker count.
TrialStats run_mc(const ProtocolParams& params, const NoiseSpec& noise,
                  std::size_t trials, Seed seed, const McOptions& options = {});

// Expected success of the same run, exact in O(M) cycles (O(M*N) segments for
// the per-segment baseline): propagates the second-moment matrix S = E[v v^T]
// through each cycle as the Bernoulli mixture of the clean-segment and
// blocked-segment linear maps and reads the success detector's diagonal entry.
double exact_expected_success(const ProtocolParams& params, const NoiseSpec& noise,
                              SlazNoise slaz_noise = SlazNoise::PerSegment);

struct ComparisonPoint {
    double block_rate;
    TrialStats stats;
    double exact;
};

// One curve of the noise-robustness comparison: a config evaluated over the
// whole block-rate grid with both the sampled and the exact success rates.
struct ComparisonCurve {
    ProtocolParams params;
    std::vector<ComparisonPoint> points;
};

std::vector<ComparisonCurve> compare_protocols(const std::vector<double>& b_grid,
                                               const std::vector<ProtocolParams>& configs,
                                               std::size_t trials, Seed seed,
                                               const McOptions& options = {});

}  // namespace cfqsim
