#pragma once

#include <cstddef>
#include <vector>

namespace cfqsim {

// The iterative module guarding the channel end: an ordered chain of N beam
// splitters with probability-domain transmissivities t_1..t_N. A pulse either
// transmits through all N splitters (probability t = prod t_j), reflects off
// some splitter and returns (P_ref, two traversals of the leading splitters,
// hence the squared factors), or is absorbed inside the module (P_abs).
class ChainModule {
  public:
    explicit ChainModule(std::vector<double> transmissivities);

    const std::vector<double>& transmissivities() const { return ts_; }
    std::size_t size() const { return ts_.size(); }

    double total_transmission() const;
    double reflect_back_prob() const;
    double absorb_prob() const;

    // Reflected-fraction shorthand: the value plugged in as the return rate c
    // of the blocked-segment attenuation.
    double effective_return_rate() const { return reflect_back_prob(); }

  private:
    std::vector<double> ts_;
};

// Builds a module of N identical splitters with total transmission t_target.
ChainModule uniform_for_target(std::size_t n, double t_target);

// Optical-delay geometry: OD_i must be longer than OD_{i-1} by the fixed
// inter-splitter interval L0 so all return paths stay phase-matched.
struct DelayGeometry {
    std::size_t n;
    double l0;  // interval between neighbouring ODs, meters
    double l1;  // optical length of OD_1, matched to the real channel, meters
};

// Lengths L_{OD_i} = L1 + (i - 1) L0 for i = 1..N.
std::vector<double> od_lengths(const DelayGeometry& geometry);

}  // namespace cfqsim
