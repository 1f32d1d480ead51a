#include "rqn/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace rqn {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::ours: return "ours";
        case Variant::ours_ms: return "ours_ms";
        case Variant::baseline_line: return "baseline_line";
        case Variant::baseline_line_ms: return "baseline_line_ms";
    }
    return "?";
}

Variant parse_variant(std::string_view name) {
    if (name == "ours") return Variant::ours;
    if (name == "ours_ms") return Variant::ours_ms;
    if (name == "baseline_line") return Variant::baseline_line;
    if (name == "baseline_line_ms") return Variant::baseline_line_ms;
    throw std::invalid_argument("unknown solver: " + std::string(name));
}

bool is_baseline(Variant v) { return v == Variant::baseline_line || v == Variant::baseline_line_ms; }
bool uses_modified_secant(Variant v) { return v == Variant::ours_ms || v == Variant::baseline_line_ms; }

std::string to_string(IterSet s) {
    switch (s) {
        case IterSet::K0: return "K0";
        case IterSet::Kplus: return "Kplus";
        case IterSet::terminal: return "terminal";
    }
    return "?";
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::max_iters: return "max_iters";
        case SolveStatus::timeout: return "timeout";
        case SolveStatus::oracle_error: return "oracle_error";
        case SolveStatus::stalled: return "stalled";
    }
    return "?";
}

SolveStatus parse_status(std::string_view s) {
    for (auto st : {SolveStatus::converged, SolveStatus::max_iters, SolveStatus::timeout, SolveStatus::oracle_error,
                    SolveStatus::stalled}) {
        if (to_string(st) == s) return st;
    }
    throw std::invalid_argument("unknown status: " + std::string(s));
}

void SolverConfig::validate() const {
    if (memory_size <= 0) throw std::invalid_argument("memory_size must be positive");
    if (k_max <= 0) throw std::invalid_argument("k_max must be positive");
    if (!(eps_gtol >= 0.0)) throw std::invalid_argument("eps_gtol must be non-negative");
    if (!(eps_f >= 0.0 && eps_f < 1.0)) throw std::invalid_argument("eps_f must lie in [0, 1)");
    if (!(time_budget_s > 0.0)) throw std::invalid_argument("time budget must be positive");
    line_search.validate();
    regularizer.validate();
}

int SolveResult::iterations() const {
    int n = 0;
    for (const auto& r : trace) n += r.set != IterSet::terminal;
    return n;
}

namespace {

using Clock = std::chrono::steady_clock;

// Scale of the gamma*I surrogate used for damping. The matrix that produced
// d satisfies (B + mu I) d = -g, so its unshifted curvature along the step is
// -g'd / ||d||^2 - mu; with that scale the damping factor is Powell's. When
// the estimate is not positive, fall back to the newest stored pair.
double damping_scale(const LbfgsMemory& memory, const Vector& d, double gd, double mu) {
    const double along_step = -gd / d.squaredNorm() - mu;
    if (along_step > 0.0 && std::isfinite(along_step)) return along_step;
    if (memory.empty()) return 1.0;
    const auto& newest = memory.pairs().back();
    return newest.yy / newest.sy;
}

SolveResult run(const ObjectiveProblem& problem, const NoiseModel& noise, const SolverConfig& cfg, bool regularized) {
    cfg.validate();
    if (problem.dim < 1) throw std::invalid_argument("problem dimension must be positive");

    NoisyOracle oracle(problem, noise, cfg.eps_f);
    const double ls_eps_f = regularized ? cfg.eps_f : 0.0;
    const bool ms = uses_modified_secant(cfg.variant);
    const auto start = Clock::now();

    SolveResult out;
    Vector x = problem.x0;
    out.x_final = x;

    auto finish = [&](SolveStatus st, double f, const Vector& g) {
        out.status = st;
        out.x_final = x;
        out.final_f_bar = f;
        out.final_g_inf = g.size() ? g.lpNorm<Eigen::Infinity>() : 0.0;
        out.f_calls = oracle.f_calls();
        out.g_calls = oracle.g_calls();
        return out;
    };

    double f = 0.0;
    Vector g;
    try {
        g = oracle.grad_bar(x);
        f = oracle.f_bar(x);
    } catch (const OracleError& e) {
        out.message = e.what();
        return finish(SolveStatus::oracle_error, f, Vector::Zero(problem.dim));
    }

    LbfgsMemory memory(static_cast<std::size_t>(cfg.memory_size));
    RegularizerState reg(cfg.regularizer);

    try {
        for (int k = 0; k < cfg.k_max; ++k) {
            const double g_inf = g.lpNorm<Eigen::Infinity>();
            if (g_inf <= cfg.eps_gtol) {
                IterationRecord rec;
                rec.k = k;
                rec.f_bar = f;
                rec.g_inf = g_inf;
                rec.g_two = g.norm();
                rec.set = IterSet::terminal;
                rec.f_calls = oracle.f_calls();
                rec.g_calls = oracle.g_calls();
                rec.restarts = reg.restarts();
                out.trace.push_back(rec);
                return finish(SolveStatus::converged, f, g);
            }
            if (std::chrono::duration<double>(Clock::now() - start).count() > cfg.time_budget_s) {
                return finish(SolveStatus::timeout, f, g);
            }
            if (cfg.fresh_fk && k > 0) f = oracle.f_bar(x);

            IterationRecord rec;
            rec.k = k;
            rec.f_bar = f;
            rec.g_inf = g_inf;
            rec.g_two = g.norm();

            bool k0 = true;
            double mu = 0.0;
            if (regularized) {
                k0 = reg.mu_zero_eligible(f);
                if (!k0) mu = reg.mu_positive(g);
            }

            Vector d = memory.two_loop_direction(g, mu);
            double gd = g.dot(d);
            if (!(gd < 0.0)) {
                // Rounding broke positive definiteness; restart from a scaled gradient step.
                memory.clear();
                d = -g / (1.0 + mu);
                gd = g.dot(d);
            }

            LineSearchResult ls = backtrack(oracle, x, d, g, f, ls_eps_f, cfg.line_search, mu, regularized);
            if (!regularized && ls.exhausted) {
                out.message = "line search could not satisfy the Armijo condition";
                return finish(SolveStatus::stalled, f, g);
            }

            Vector x_new = x + ls.alpha * d;
            Vector g_new = ls.g_new ? std::move(*ls.g_new) : oracle.grad_bar(x_new);
            if (regularized && k0) reg.register_k0(f, ls.delta);

            rec.mu = mu;
            rec.alpha = ls.alpha;
            rec.delta = ls.delta;
            rec.set = k0 ? IterSet::K0 : IterSet::Kplus;
            rec.rejections = ls.rejections;
            rec.rescaled = ls.rescaled;
            rec.rescale_probes = ls.rescale_probes;
            rec.ls_exhausted = ls.exhausted;
            rec.gd = gd;
            rec.f_calls = oracle.f_calls();
            rec.g_calls = oracle.g_calls();
            rec.restarts = reg.restarts();
            out.trace.push_back(rec);

            // raw y -> (modified secant) -> damping -> screening -> memory
            Vector s = x_new - x;
            Vector y = g_new - g;
            if (ms) y = modified_secant(y, s, f, ls.f_bar_new, g, g_new);
            if (auto y_bar = powell_damp(s, y, damping_scale(memory, d, gd, mu))) {
                if (screen_pair(s, *y_bar, cfg.screen)) memory.push(CurvaturePair::make(std::move(s), std::move(*y_bar)));
            }

            x = std::move(x_new);
            g = std::move(g_new);
            f = ls.f_bar_new;
        }
    } catch (const OracleError& e) {
        out.message = e.what();
        return finish(SolveStatus::oracle_error, f, g);
    }

    // The final gradient has not been tested yet.
    if (g.lpNorm<Eigen::Infinity>() <= cfg.eps_gtol) {
        IterationRecord rec;
        rec.k = cfg.k_max;
        rec.f_bar = f;
        rec.g_inf = g.lpNorm<Eigen::Infinity>();
        rec.g_two = g.norm();
        rec.set = IterSet::terminal;
        rec.f_calls = oracle.f_calls();
        rec.g_calls = oracle.g_calls();
        rec.restarts = reg.restarts();
        out.trace.push_back(rec);
        return finish(SolveStatus::converged, f, g);
    }
    return finish(SolveStatus::max_iters, f, g);
}

}  // namespace

SolveResult minimize(const ObjectiveProblem& problem, const NoiseModel& noise, const SolverConfig& cfg) {
    return run(problem, noise, cfg, true);
}

SolveResult minimize_baseline(const ObjectiveProblem& problem, const NoiseModel& noise, const SolverConfig& cfg) {
    return run(problem, noise, cfg, false);
}

SolveResult solve(const ObjectiveProblem& problem, const NoiseModel& noise, const SolverConfig& cfg) {
    return is_baseline(cfg.variant) ? minimize_baseline(problem, noise, cfg) : minimize(problem, noise, cfg);
}

}  // namespace rqn
