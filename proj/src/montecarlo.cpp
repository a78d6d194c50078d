#include "cfqsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <utility>

namespace cfqsim {

namespace {

void require_unit_interval(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::domain_error(std::string(what) + " must lie in [0, 1]");
    }
}

// Fills `values` with one success mass per trial. Workers split the trial
// range into contiguous chunks; every trial's stream is keyed by its global
// index, so the partition never changes the numbers.
template <typename RunnerFactory>
std::vector<double> run_trials(std::size_t trials, Seed seed, int workers,
                               RunnerFactory make_runner) {
    std::vector<double> values(trials);
    const std::size_t worker_count = std::min<std::size_t>(
        trials, static_cast<std::size_t>(std::max(workers, 1)));
    if (worker_count <= 1) {
        auto runner = make_runner();
        for (std::size_t t = 0; t < trials; ++t) {
            TrialStream stream(seed, t);
            values[t] = runner(stream);
        }
        return values;
    }
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    const std::size_t chunk = (trials + worker_count - 1) / worker_count;
    for (std::size_t w = 0; w < worker_count; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(trials, lo + chunk);
        if (lo >= hi) {
            break;
        }
        pool.emplace_back([&values, seed, lo, hi, &make_runner] {
            auto runner = make_runner();
            for (std::size_t t = lo; t < hi; ++t) {
                TrialStream stream(seed, t);
                values[t] = runner(stream);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    return values;
}

TrialStats stats_from(const std::vector<double>& values) {
    TrialStats stats;
    stats.n = values.size();
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    stats.mean = sum / static_cast<double>(stats.n);
    if (stats.n > 1) {
        double sq = 0.0;
        for (double v : values) {
            const double d = v - stats.mean;
            sq += d * d;
        }
        stats.variance = sq / static_cast<double>(stats.n - 1);
    }
    stats.stderr_mean = std::sqrt(stats.variance / static_cast<double>(stats.n));
    stats.ci95_half_width = 1.96 * stats.stderr_mean;
    return stats;
}

struct SymmetricMoment2 {
    double xx, xy, yy;
};

// S -> R S R^T for the rotation R = [[c, -s], [s, c]].
SymmetricMoment2 rotate_moment(const SymmetricMoment2& m, double c, double s) {
    return SymmetricMoment2{
        c * c * m.xx - 2.0 * c * s * m.xy + s * s * m.yy,
        c * s * m.xx + (c * c - s * s) * m.xy - c * s * m.yy,
        s * s * m.xx + 2.0 * c * s * m.xy + c * c * m.yy};
}

double exact_improved(const ImprovedParams& params, const NoiseSpec& noise) {
    const double b = noise.block_rate;
    const double c = noise.return_rate;
    // Segment obstruction scales the channel amplitude by a random factor
    // (1 w.p. 1-B, c w.p. B); the moment entries pick up its first and
    // second moments.
    const double scale_xy = (1.0 - b) + b * c;
    const double scale_yy = (1.0 - b) + b * c * c;
    const double ct = std::cos(params.theta);
    const double st = std::sin(params.theta);
    SymmetricMoment2 m{1.0, 0.0, 0.0};
    for (int i = 0; i < params.cycles; ++i) {
        m = rotate_moment(m, ct, st);
        m.xy *= scale_xy;
        m.yy *= scale_yy;
    }
    return m.yy;
}

double exact_slaz_outer(const SlazParams& params, const NoiseSpec& noise) {
    const double b = noise.block_rate;
    const double cm = std::cos(params.theta_outer);
    const double sm = std::sin(params.theta_outer);
    const double damping =
        std::pow(std::cos(params.theta_inner), static_cast<double>(params.inner_cycles));
    SymmetricMoment2 m{1.0, 0.0, 0.0};
    for (int i = 0; i < params.outer_cycles; ++i) {
        const SymmetricMoment2 r = rotate_moment(m, cm, sm);
        // Pass branch drains the inner arm at cycle end; blocked branch keeps
        // it, damped per inner step.
        m.xx = r.xx;
        m.xy = b * damping * r.xy;
        m.yy = b * damping * damping * r.yy;
    }
    return m.xx;
}

struct SymmetricMoment3 {
    double oo, oi, oc, ii, ic, cc;
};

double exact_slaz_segment(const SlazParams& params, const NoiseSpec& noise) {
    const double keep = 1.0 - noise.block_rate;
    const double cm = std::cos(params.theta_outer);
    const double sm = std::sin(params.theta_outer);
    const double ci = std::cos(params.theta_inner);
    const double si = std::sin(params.theta_inner);
    SymmetricMoment3 m{1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    for (int cycle = 0; cycle < params.outer_cycles; ++cycle) {
        // Outer beam splitter rotates the (outer, inner) block.
        {
            const double oo = cm * cm * m.oo - 2.0 * cm * sm * m.oi + sm * sm * m.ii;
            const double oi =
                cm * sm * m.oo + (cm * cm - sm * sm) * m.oi - cm * sm * m.ii;
            const double ii = sm * sm * m.oo + 2.0 * cm * sm * m.oi + cm * cm * m.ii;
            const double oc = cm * m.oc - sm * m.ic;
            const double ic = sm * m.oc + cm * m.ic;
            m = SymmetricMoment3{oo, oi, oc, ii, ic, m.cc};
        }
        for (int k = 0; k < params.inner_cycles; ++k) {
            // Inner beam splitter rotates the (inner, channel) block.
            const double ii = ci * ci * m.ii - 2.0 * ci * si * m.ic + si * si * m.cc;
            const double ic =
                ci * si * m.ii + (ci * ci - si * si) * m.ic - ci * si * m.cc;
            const double cc = si * si * m.ii + 2.0 * ci * si * m.ic + ci * ci * m.cc;
            const double oi = ci * m.oi - si * m.oc;
            const double oc = si * m.oi + ci * m.oc;
            // Obstruction zeroes the channel amplitude with probability B.
            m = SymmetricMoment3{m.oo, oi, keep * oc, ii, keep * ic, keep * cc};
        }
        // Cycle-end drain to the inner detector empties the channel arm.
        m.oc = 0.0;
        m.ic = 0.0;
        m.cc = 0.0;
    }
    return m.oo;
}

struct ImprovedTrialRunner {
    const ImprovedParams& params;
    NoiseSpec noise;
    NoiseMask mask;

    double operator()(TrialStream& stream) {
        const double b = noise.block_rate;
        for (std::size_t i = 0; i < mask.size(); ++i) {
            mask[i] = stream.uniform() < b;
        }
        return improved_run(params, BobBit::Pass, mask, noise.return_rate).d2;
    }
};

struct SlazOuterTrialRunner {
    const SlazParams& params;
    double block_rate;
    NoiseMask mask;

    double operator()(TrialStream& stream) {
        for (std::size_t i = 0; i < mask.size(); ++i) {
            mask[i] = stream.uniform() < block_rate;
        }
        return slaz_run(params, BobBit::Pass, mask).d1;
    }
};

struct SlazSegmentTrialRunner {
    const SlazParams& params;
    double block_rate;
    SegmentMask mask;

    double operator()(TrialStream& stream) {
        for (std::size_t i = 0; i < mask.size(); ++i) {
            mask[i] = stream.uniform() < block_rate ? 1 : 0;
        }
        return slaz_run_segments(params, BobBit::Pass, mask).d1;
    }
};

}  // namespace

NoiseMask sample_mask(std::size_t count, double block_rate, TrialStream& stream) {
    require_unit_interval(block_rate, "block rate B");
    NoiseMask mask(count);
    for (std::size_t i = 0; i < count; ++i) {
        mask[i] = stream.uniform() < block_rate;
    }
    return mask;
}

TrialStats run_mc(const ProtocolParams& params, const NoiseSpec& noise,
                  std::size_t trials, Seed seed, const McOptions& options) {
    if (trials < 1) {
        throw std::invalid_argument("trial count must be >= 1");
    }
    require_unit_interval(noise.block_rate, "block rate B");
    require_unit_interval(noise.return_rate, "return rate c");

    std::vector<double> values;
    if (const auto* improved = std::get_if<ImprovedParams>(&params)) {
        values = run_trials(trials, seed, options.workers, [&] {
            return ImprovedTrialRunner{
                *improved, noise,
                NoiseMask(static_cast<std::size_t>(improved->cycles))};
        });
    } else {
        const auto& slaz = std::get<SlazParams>(params);
        if (options.slaz_noise == SlazNoise::PerOuterCycle) {
            values = run_trials(trials, seed, options.workers, [&] {
                return SlazOuterTrialRunner{
                    slaz, noise.block_rate,
                    NoiseMask(static_cast<std::size_t>(slaz.outer_cycles))};
            });
        } else {
            values = run_trials(trials, seed, options.workers, [&] {
                return SlazSegmentTrialRunner{
                    slaz, noise.block_rate,
                    SegmentMask(static_cast<std::size_t>(slaz.outer_cycles) *
                                static_cast<std::size_t>(slaz.inner_cycles))};
            });
        }
    }
    return stats_from(values);
}

double exact_expected_success(const ProtocolParams& params, const NoiseSpec& noise,
                              SlazNoise slaz_noise) {
    require_unit_interval(noise.block_rate, "block rate B");
    require_unit_interval(noise.return_rate, "return rate c");
    if (const auto* improved = std::get_if<ImprovedParams>(&params)) {
        return exact_improved(*improved, noise);
    }
    const auto& slaz = std::get<SlazParams>(params);
    return slaz_noise == SlazNoise::PerOuterCycle ? exact_slaz_outer(slaz, noise)
                                                  : exact_slaz_segment(slaz, noise);
}

std::vector<ComparisonCurve> compare_protocols(const std::vector<double>& b_grid,
                                               const std::vector<ProtocolParams>& configs,
                                               std::size_t trials, Seed seed,
                                               const McOptions& options) {
    if (b_grid.empty() || configs.empty()) {
        throw std::invalid_argument("comparison needs a non-empty grid and configs");
    }
    std::vector<ComparisonCurve> curves;
    curves.reserve(configs.size());
    for (const auto& config : configs) {
        ComparisonCurve curve{config, {}};
        curve.points.reserve(b_grid.size());
        for (double b : b_grid) {
            const NoiseSpec noise{b, 0.0};
            ComparisonPoint point{b, run_mc(config, noise, trials, seed, options),
                                  exact_expected_success(config, noise,
                                                         options.slaz_noise)};
            curve.points.push_back(point);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

}  // namespace cfqsim
