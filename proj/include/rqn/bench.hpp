#pragma once

#include "rqn/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace rqn {

/// Oracle-call count recorded for failed runs.
inline constexpr double kFailedCalls = std::numeric_limits<double>::infinity();

enum class CallMetric { total, f_only };

struct RunRecord {
    std::string problem;
    std::string solver;
    std::uint64_t seed = 0;
    SolveStatus status = SolveStatus::max_iters;
    double oracle_calls = kFailedCalls;  ///< infinite unless converged
    std::uint64_t f_calls = 0;
    std::uint64_t g_calls = 0;
    int iters = 0;
    double final_f_bar = 0.0;
    double final_g_inf = 0.0;
    double wall_ms = 0.0;

    bool operator==(const RunRecord&) const = default;
};

struct ProfilePoint {
    double tau = 1.0;
    double rho = 0.0;
};

struct ProfileCurve {
    std::string solver;
    std::vector<ProfilePoint> points;

    /// rho(tau) as a right-continuous step function of the sampled points.
    double rho_at(double tau) const;
};

struct ProfileResult {
    std::vector<ProfileCurve> curves;
    int counted_problems = 0;
    /// Problems where every solver failed; left out of |P|.
    std::vector<std::string> dropped_problems;
};

struct MatrixSpec {
    std::vector<std::string> problems;
    std::vector<Variant> solvers;
    NoiseModel noise;
    /// Negative selects default_eps_f(noise).
    double eps_f = -1.0;
    double eps_gtol = 1e-2;
    int k_max = 15000;
    double time_budget_s = 600.0;
    std::vector<std::uint64_t> seeds{0};
    int jobs = 1;
    bool fresh_fk = false;
    CallMetric metric = CallMetric::total;
};

/// Called once per finished run, possibly from several worker threads at once.
using RunVisitor = std::function<void(const RunRecord&, const SolveResult&)>;

/// Noise stream key for one (problem, seed); shared by every solver so they see the same stream.
std::uint64_t noise_seed(const std::string& problem, std::uint64_t seed);

/// Runs every (problem, solver, seed) triple on its own oracle. Unknown
/// names throw std::invalid_argument before any run starts. The output is
/// sorted by (problem, solver, seed) and does not depend on `jobs`.
std::vector<RunRecord> run_matrix(const MatrixSpec& spec, const RunVisitor& visit = {});

RunRecord make_record(const std::string& problem, Variant solver, std::uint64_t seed, const SolveResult& res,
                      double wall_ms, CallMetric metric = CallMetric::total);

/// One record per (problem, solver): median oracle_calls over the converged
/// seeds, and failure when more than half of the seeds failed.
std::vector<RunRecord> aggregate_seeds(const std::vector<RunRecord>& records);

/// Performance profile over records holding one entry per (problem, solver).
/// Throws std::invalid_argument on duplicates.
ProfileResult performance_profile(const std::vector<RunRecord>& records, const std::vector<std::string>& solvers);

inline constexpr const char* kRunsHeader =
    "problem,solver,seed,status,oracle_calls,f_calls,g_calls,iters,final_f_bar,final_g_inf,wall_ms";
inline constexpr const char* kTraceHeader = "k,f_bar,g_inf,g_two,mu,alpha,delta,set,rejections,f_calls,g_calls";
inline constexpr const char* kProfileHeader = "solver,tau,rho";

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_runs_csv(std::istream& is);
void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& trace);
void write_profile_csv(std::ostream& os, const ProfileResult& profile);
void write_profile_svg(std::ostream& os, const ProfileResult& profile);

/// File variants; throw std::runtime_error when the path cannot be opened.
void emit_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);
void emit_csv(const ProfileResult& profile, const std::filesystem::path& path);
void emit_svg(const ProfileResult& profile, const std::filesystem::path& path);
std::vector<RunRecord> load_runs_csv(const std::filesystem::path& path);

}  // namespace rqn
