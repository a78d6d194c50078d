"""Simulator and analytics for chained-Zeno counterfactual communication."""

from ._core import (
    BobBit,
    ChainModule,
    CounterfactualityVec,
    DelayGeometry,
    DetectorDist,
    ImprovedParams,
    McOptions,
    NoiseSpec,
    Protocol,
    Seed,
    SlazNoise,
    SlazParams,
    ThreeModeState,
    TrialStats,
    TwoModeState,
    attenuate_channel,
    counterfactuality_improved,
    detect,
    equivalent_distance,
    exact_expected_success,
    improved_c0,
    improved_c1,
    improved_run,
    improved_single_block_d2,
    od_lengths,
    rotate,
    run_mc,
    slaz_p1,
    slaz_p2,
    slaz_run,
    slaz_run_segments,
    theta_of,
    uniform_for_target,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
