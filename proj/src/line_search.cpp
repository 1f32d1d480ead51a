#include "rqn/line_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rqn {

void LineSearchConfig::validate() const {
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("line search: c must lie in (0, 1)");
    if (!(beta_min > 0.0 && beta_min < beta_max && beta_max < 1.0)) {
        throw std::invalid_argument("line search: need 0 < beta_min < beta_max < 1");
    }
    if (max_rejections <= 0) throw std::invalid_argument("line search: max_rejections must be positive");
}

double compute_delta(double eps_f, double f_bar_x, double f_bar_trial) {
    return (2.0 * eps_f / (1.0 - eps_f)) * std::max({1.0, f_bar_x, -f_bar_trial});
}

bool relaxed_armijo(double f_bar_x, double c, double alpha, double gd, double delta, double f_bar_trial) {
    return f_bar_x + c * alpha * gd + delta >= f_bar_trial;
}

double interpolate_step(double alpha, double f0, double gd, double f_alpha, const LineSearchConfig& cfg) {
    const double curvature = f_alpha - f0 - gd * alpha;
    double next = 0.5 * alpha;
    if (curvature > 0.0 && std::isfinite(curvature)) {
        const double candidate = -gd * alpha * alpha / (2.0 * curvature);
        if (std::isfinite(candidate)) next = candidate;
    }
    return std::clamp(next, cfg.beta_min * alpha, cfg.beta_max * alpha);
}

double secant_rescale(double alpha, const Vector& d, const Vector& g, const Vector& g_try,
                      const LineSearchConfig& cfg) {
    const double dg = d.dot(g);
    const double dg_try = d.dot(g_try);
    if (!(dg < 0.0 && dg_try > 0.0 && dg_try > 0.5 * d.norm() * g_try.norm())) return alpha;
    const double scaled = alpha * (-dg) / (dg_try - dg);
    return std::clamp(scaled, cfg.beta_min * alpha, cfg.beta_max * alpha);
}

LineSearchResult backtrack(NoisyOracle& oracle, const Vector& x, const Vector& d, const Vector& g, double f_bar_x,
                           double eps_f, const LineSearchConfig& cfg, double mu, bool allow_rescale) {
    const double gd = g.dot(d);
    LineSearchResult res;
    double alpha = 1.0;
    double f_trial = oracle.f_bar(x + alpha * d);
    double delta = compute_delta(eps_f, f_bar_x, f_trial);

    while (!relaxed_armijo(f_bar_x, cfg.c, alpha, gd, delta, f_trial)) {
        if (res.rejections == cfg.max_rejections) {
            res.exhausted = true;
            break;
        }
        ++res.rejections;
        alpha = interpolate_step(alpha, f_bar_x, gd, f_trial, cfg);
        f_trial = oracle.f_bar(x + alpha * d);
        delta = compute_delta(eps_f, f_bar_x, f_trial);
    }

    res.alpha = alpha;
    res.delta = delta;
    res.f_bar_new = f_trial;

    if (mu > 0.0 && allow_rescale && alpha == 1.0 && res.rejections == 0 && !res.exhausted) {
        Vector g_try = oracle.grad_bar(x + d);
        const double rescaled = secant_rescale(alpha, d, g, g_try, cfg);
        if (rescaled != alpha) {
            ++res.rescale_probes;
            const double f_rescaled = oracle.f_bar(x + rescaled * d);
            const double delta_rescaled = compute_delta(eps_f, f_bar_x, f_rescaled);
            if (relaxed_armijo(f_bar_x, cfg.c, rescaled, gd, delta_rescaled, f_rescaled)) {
                res.alpha = rescaled;
                res.delta = delta_rescaled;
                res.f_bar_new = f_rescaled;
                res.rescaled = true;
                return res;  // g_try belongs to the unit step and is discarded
            }
        }
        res.g_new = std::move(g_try);
    }
    return res;
}

}  // namespace rqn
