#pragma once

#include "rqn/problems.hpp"

#include <limits>

namespace rqn {

struct RegularizerConfig {
    double varsigma = 1e-10;
    double theta_min = 1e-2;
    double theta_max = 1.0;
    /// Drop in the zero-shift threshold that restarts the gradient accumulator.
    double restart_threshold = 1.0;

    void validate() const;
};

/// Bookkeeping behind the choice of the shift mu_k.
///
/// Iterations split into K0 (mu = 0, allowed only when f_bar has dropped to
/// the lowest level recorded over K0) and K+ (mu > 0, an AdaGrad-Norm style
/// accumulator over gradients of K+ iterations).
class RegularizerState {
public:
    explicit RegularizerState(RegularizerConfig cfg = {});

    /// min over K0 of f_bar_j - delta_j >= f_bar_k; the empty minimum is +inf.
    bool mu_zero_eligible(double f_bar_k) const;

    /// Records an accepted K0 iteration. When the threshold drops by more
    /// than restart_threshold the K+ accumulator is reset; the K0 level is kept.
    void register_k0(double f_bar_k, double delta_k);

    /// Adds ||g_k||^2 to the accumulator, then returns
    /// clip(||g_k|| / 10, theta_min G, theta_max G) with G = sqrt(varsigma + energy).
    double mu_positive(const Vector& g_k);

    double best_k0_level() const { return best_k0_level_; }
    double g_energy() const { return g_energy_; }
    /// G after the latest mu_positive call.
    double accumulator() const;
    int restarts() const { return restarts_; }
    const RegularizerConfig& config() const { return cfg_; }

private:
    RegularizerConfig cfg_;
    double best_k0_level_ = std::numeric_limits<double>::infinity();
    double g_energy_ = 0.0;
    int restarts_ = 0;
};

}  // namespace rqn
