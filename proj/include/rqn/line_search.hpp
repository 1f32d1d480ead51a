#pragma once

#include "rqn/noise_oracle.hpp"

#include <optional>

namespace rqn {

struct LineSearchConfig {
    double c = 1e-4;
    double beta_min = 1.0 / 16.0;
    double beta_max = 15.0 / 16.0;
    int max_rejections = 100;

    void validate() const;
};

struct LineSearchResult {
    double alpha = 1.0;
    double delta = 0.0;      ///< error-absorbing term at the accepted step
    double f_bar_new = 0.0;  ///< f_bar(x + alpha d)
    int rejections = 0;
    bool rescaled = false;   ///< secant-like rescale was applied and accepted
    bool exhausted = false;  ///< max_rejections hit; alpha is the last trial
    int rescale_probes = 0;  ///< extra f_bar calls spent re-testing a rescaled step
    /// Gradient at x + alpha d when the line search already evaluated it.
    std::optional<Vector> g_new;
};

/// (2 eps_f / (1 - eps_f)) * max(1, f_bar_x, -f_bar_trial).
double compute_delta(double eps_f, double f_bar_x, double f_bar_trial);

/// Relaxed Armijo test f_bar_x + c alpha g'd + delta >= f_bar_trial.
bool relaxed_armijo(double f_bar_x, double c, double alpha, double gd, double delta, double f_bar_trial);

/// Minimizer of the quadratic through phi(0), phi'(0) and phi(alpha),
/// clipped to [beta_min alpha, beta_max alpha]. Degenerate fits use alpha / 2.
double interpolate_step(double alpha, double f0, double gd, double f_alpha, const LineSearchConfig& cfg);

/// One-time secant-like step correction. Returns alpha unchanged unless d'g < 0,
/// d'g_try > 0 and d'g_try > 0.5 ||d|| ||g_try||.
double secant_rescale(double alpha, const Vector& d, const Vector& g, const Vector& g_try,
                      const LineSearchConfig& cfg);

/// Backtracking from alpha = 1 until the relaxed Armijo condition holds,
/// with delta recomputed at every trial. eps_f = 0 gives the classical test.
///
/// When mu > 0 and allow_rescale is set and the unit step is accepted on the
/// first try, the gradient at x + d is evaluated and the step is rescaled once.
/// The rescaled step is re-tested; on failure the unit step is kept.
LineSearchResult backtrack(NoisyOracle& oracle, const Vector& x, const Vector& d, const Vector& g, double f_bar_x,
                           double eps_f, const LineSearchConfig& cfg, double mu, bool allow_rescale);

}  // namespace rqn
