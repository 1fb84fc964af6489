#include "jsched/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace jsched {

double prd(double alg, double ref) {
    if (!(ref > 0)) throw std::invalid_argument("prd: reference must be positive");
    return (alg - ref) / ref * 100.0;
}

double gmr(std::span<const double> alg, std::span<const double> best) {
    if (alg.size() != best.size()) throw std::invalid_argument("gmr: length mismatch");
    if (alg.empty()) throw std::invalid_argument("gmr: empty input");
    double log_sum = 0;
    for (std::size_t i = 0; i < alg.size(); ++i) {
        if (!(alg[i] > 0) || !(best[i] > 0)) throw std::invalid_argument("gmr: entries must be positive");
        log_sum += std::log(alg[i] / best[i]);
    }
    return std::exp(log_sum / static_cast<double>(alg.size()));
}

double normalized_cost(const Instance& inst, Time cost) {
    if (!inst.has_targets()) throw std::invalid_argument("normalized_cost: instance has no due dates");
    Time denom = 0;
    for (int x = 0; x < inst.n_jobs; ++x) denom += inst.targets[x].w_tardy * inst.job_length(x);
    if (denom == 0) throw std::invalid_argument("normalized_cost: zero denominator");
    return static_cast<double>(cost) / static_cast<double>(denom);
}

} // namespace jsched
