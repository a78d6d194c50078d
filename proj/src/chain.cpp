#include "cfqsim/chain.hpp"

#include <cmath>
#include <stdexcept>

namespace cfqsim {

ChainModule::ChainModule(std::vector<double> transmissivities)
    : ts_(std::move(transmissivities)) {
    if (ts_.empty()) {
        throw std::invalid_argument("chain module needs at least one splitter");
    }
    for (double t : ts_) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw std::domain_error("splitter transmissivity outside [0, 1]");
        }
    }
}

double ChainModule::total_transmission() const {
    double t = 1.0;
    for (double tj : ts_) {
        t *= tj;
    }
    return t;
}

double ChainModule::reflect_back_prob() const {
    // Sum over the splitter where the reflection happens; the pulse crosses
    // the preceding splitters twice, so each contributes t_j squared.
    double prefix_sq = 1.0;
    double p_ref = 0.0;
    for (double tj : ts_) {
        const double r = 1.0 - tj;
        p_ref += prefix_sq * r * r;
        prefix_sq *= tj * tj;
    }
    return p_ref;
}

double ChainModule::absorb_prob() const {
    const double p = 1.0 - reflect_back_prob() - total_transmission();
    return p < 0.0 ? 0.0 : p;
}

ChainModule uniform_for_target(std::size_t n, double t_target) {
    if (n == 0) {
        throw std::invalid_argument("chain module needs at least one splitter");
    }
    if (!(t_target > 0.0 && t_target <= 1.0)) {
        throw std::domain_error(
            "target transmission must lie in (0, 1]; use an explicit module "
            "for a fully blocked chain");
    }
    const double tj = std::pow(t_target, 1.0 / static_cast<double>(n));
    return ChainModule(std::vector<double>(n, tj));
}

std::vector<double> od_lengths(const DelayGeometry& geometry) {
    if (geometry.n == 0 || !(geometry.l0 > 0.0) || !(geometry.l1 > 0.0)) {
        throw std::domain_error("delay geometry needs n >= 1 and positive lengths");
    }
    std::vector<double> lengths(geometry.n);
    for (std::size_t i = 0; i < geometry.n; ++i) {
        lengths[i] = geometry.l1 + static_cast<double>(i) * geometry.l0;
    }
    return lengths;
}

}  // namespace cfqsim
