#include "rqn/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rqn {

void RegularizerConfig::validate() const {
    if (!(varsigma > 0.0 && varsigma < 1.0)) throw std::invalid_argument("regularizer: varsigma must lie in (0, 1)");
    if (!(theta_min > 0.0 && theta_min <= theta_max)) {
        throw std::invalid_argument("regularizer: need 0 < theta_min <= theta_max");
    }
}

RegularizerState::RegularizerState(RegularizerConfig cfg) : cfg_(cfg) { cfg_.validate(); }

bool RegularizerState::mu_zero_eligible(double f_bar_k) const { return best_k0_level_ >= f_bar_k; }

void RegularizerState::register_k0(double f_bar_k, double delta_k) {
    const double before = best_k0_level_;
    best_k0_level_ = std::min(best_k0_level_, f_bar_k - delta_k);
    if (std::isfinite(before) && before - f_bar_k > cfg_.restart_threshold) {
        g_energy_ = 0.0;
        ++restarts_;
    }
}

double RegularizerState::mu_positive(const Vector& g_k) {
    const double norm = g_k.norm();
    if (!std::isfinite(norm)) throw std::domain_error("mu_positive: non-finite gradient");
    g_energy_ += norm * norm;
    const double G = accumulator();
    return std::clamp(norm / 10.0, cfg_.theta_min * G, cfg_.theta_max * G);
}

double RegularizerState::accumulator() const { return std::sqrt(cfg_.varsigma + g_energy_); }

}  // namespace rqn
