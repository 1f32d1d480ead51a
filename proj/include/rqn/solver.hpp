#pragma once

#include "rqn/lbfgs.hpp"
#include "rqn/line_search.hpp"
#include "rqn/noise_oracle.hpp"
#include "rqn/regularizer.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rqn {

enum class Variant { ours, ours_ms, baseline_line, baseline_line_ms };

std::string to_string(Variant v);
/// Throws std::invalid_argument for unknown names.
Variant parse_variant(std::string_view name);
bool is_baseline(Variant v);
bool uses_modified_secant(Variant v);

struct SolverConfig {
    int memory_size = 10;
    int k_max = 15000;
    /// Stop when ||g||_inf <= eps_gtol. Zero stops only at exact stationarity.
    double eps_gtol = 1e-5;
    LineSearchConfig line_search{};
    RegularizerConfig regularizer{};
    ScreenConstants screen{};
    double eps_f = 0.0;
    Variant variant = Variant::ours;
    double time_budget_s = 600.0;
    /// Re-evaluate f_bar(x_k) each iteration instead of reusing the accepted trial value.
    bool fresh_fk = false;

    void validate() const;
};

enum class IterSet { K0, Kplus, terminal };
std::string to_string(IterSet s);

/// State at x_k and the step taken from it. A converged run ends with one
/// `terminal` record (no step, mu = alpha = delta = 0).
struct IterationRecord {
    int k = 0;
    double f_bar = 0.0;
    double g_inf = 0.0;
    double g_two = 0.0;
    double mu = 0.0;
    double alpha = 0.0;
    double delta = 0.0;
    IterSet set = IterSet::K0;
    int rejections = 0;
    std::uint64_t f_calls = 0;  ///< cumulative, after this iteration's work
    std::uint64_t g_calls = 0;
    bool rescaled = false;
    int rescale_probes = 0;
    bool ls_exhausted = false;
    double gd = 0.0;   ///< g_k'd_k
    int restarts = 0;  ///< accumulator restarts so far, including this iteration's
};

enum class SolveStatus { converged, max_iters, timeout, oracle_error, stalled };
std::string to_string(SolveStatus s);
SolveStatus parse_status(std::string_view s);

struct SolveResult {
    SolveStatus status = SolveStatus::max_iters;
    Vector x_final;
    double final_f_bar = 0.0;
    double final_g_inf = 0.0;
    std::vector<IterationRecord> trace;
    std::uint64_t f_calls = 0;
    std::uint64_t g_calls = 0;
    std::string message;

    /// Number of steps taken (the terminal record is not a step).
    int iterations() const;
};

/// Dispatches on cfg.variant.
SolveResult solve(const ObjectiveProblem& problem, const NoiseModel& noise, const SolverConfig& cfg);

/// Noise-tolerant regularized quasi-Newton method (variants ours / ours_ms).
SolveResult minimize(const ObjectiveProblem& problem, const NoiseModel& noise, const SolverConfig& cfg);

/// Classical Armijo backtracking L-BFGS comparator: mu = 0, delta = 0, no rescale.
/// Stops with status `stalled` when backtracking exhausts its budget.
SolveResult minimize_baseline(const ObjectiveProblem& problem, const NoiseModel& noise, const SolverConfig& cfg);

}  // namespace rqn
