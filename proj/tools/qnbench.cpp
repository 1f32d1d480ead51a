// qnbench: run solver x problem x seed matrices and build performance profiles.

#include "rqn/bench.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<std::string> parse_suite(const std::string& suite) {
    if (suite == "all") {
        std::vector<std::string> names;
        for (const auto& p : rqn::registry()) names.push_back(p.name);
        return names;
    }
    if (suite == "desk") return rqn::desk_suite();
    return split(suite, ',');
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
    std::vector<std::uint64_t> out;
    for (const auto& part : split(s, ',')) {
        if (auto dots = part.find(".."); dots != std::string::npos) {
            const auto lo = std::stoull(part.substr(0, dots));
            const auto hi = std::stoull(part.substr(dots + 2));
            if (hi < lo) throw std::invalid_argument("empty seed range: " + part);
            for (auto v = lo; v <= hi; ++v) out.push_back(v);
        } else {
            out.push_back(std::stoull(part));
        }
    }
    if (out.empty()) throw std::invalid_argument("no seeds given");
    return out;
}

rqn::NoiseModel parse_noise(const std::string& s) {
    if (s == "exact") return rqn::NoiseModel::exact();
    if (s.rfind("uniform:", 0) == 0) return rqn::NoiseModel::uniform(std::stod(s.substr(8)));
    if (s.rfind("cast:", 0) == 0) return rqn::NoiseModel::cast(std::stoi(s.substr(5)));
    throw std::invalid_argument("unknown noise model: " + s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmark harness for the regularized quasi-Newton solvers"};
    app.require_subcommand(1);

    std::string suite = "desk", solvers = "ours,baseline_line", noise = "exact", eps_f = "auto", seeds = "0";
    std::string out_path = "runs.csv", trace_dir, grad_mode = "percomp", metric = "total";
    double gtol = 1e-2, time_budget = 600.0;
    int kmax = 15000;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    bool fresh_fk = false;

    auto* run = app.add_subcommand("run", "Run a benchmark matrix and write runs.csv");
    run->add_option("--suite", suite, "Problem name, comma list, 'desk' or 'all'");
    run->add_option("--solver", solvers, "Comma list of ours, ours_ms, baseline_line, baseline_line_ms");
    run->add_option("--noise", noise, "exact | uniform:LEVEL | cast:BITS");
    run->add_option("--eps-f", eps_f, "auto or a value in [0, 1)");
    run->add_option("--gtol", gtol, "Infinity-norm gradient tolerance");
    run->add_option("--kmax", kmax, "Maximum iterations");
    run->add_option("--seeds", seeds, "Seed list such as 0..19 or 1,4,7");
    run->add_option("--jobs", jobs, "Worker threads");
    run->add_option("--time-budget", time_budget, "Wall-clock limit per run in seconds");
    run->add_option("--out", out_path, "Output CSV");
    run->add_option("--trace-dir", trace_dir, "Write one trace CSV per run into this directory");
    run->add_flag("--fresh-fk", fresh_fk, "Re-evaluate f_bar(x_k) every iteration");
    run->add_option("--noise-grad-mode", grad_mode, "percomp | rank1")->check(CLI::IsMember({"percomp", "rank1"}));
    run->add_option("--metric", metric, "Oracle-call metric: total | f")->check(CLI::IsMember({"total", "f"}));

    std::string in_path = "runs.csv", profile_out = "profile.csv", svg_out;
    auto* prof = app.add_subcommand("profile", "Build performance profiles from runs.csv");
    prof->add_option("--in", in_path, "Input runs CSV");
    prof->add_option("--out", profile_out, "Output profile CSV");
    prof->add_option("--svg", svg_out, "Optional SVG plot");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            rqn::MatrixSpec spec;
            spec.problems = parse_suite(suite);
            for (const auto& s : split(solvers, ',')) spec.solvers.push_back(rqn::parse_variant(s));
            spec.noise = parse_noise(noise);
            spec.noise.grad_mode = grad_mode == "rank1" ? rqn::GradNoiseMode::rank1 : rqn::GradNoiseMode::percomp;
            spec.eps_f = eps_f == "auto" ? -1.0 : std::stod(eps_f);
            spec.eps_gtol = gtol;
            spec.k_max = kmax;
            spec.seeds = parse_seeds(seeds);
            spec.jobs = jobs;
            spec.time_budget_s = time_budget;
            spec.fresh_fk = fresh_fk;
            spec.metric = metric == "f" ? rqn::CallMetric::f_only : rqn::CallMetric::total;
            for (const auto& p : spec.problems) (void)rqn::find_problem(p);

            rqn::RunVisitor visit;
            if (!trace_dir.empty()) {
                std::filesystem::create_directories(trace_dir);
                visit = [&](const rqn::RunRecord& r, const rqn::SolveResult& res) {
                    const auto path = std::filesystem::path(trace_dir) /
                                      (r.problem + "__" + r.solver + "__seed" + std::to_string(r.seed) + ".csv");
                    std::ofstream os(path);
                    if (!os) throw std::runtime_error("cannot write " + path.string());
                    rqn::write_trace_csv(os, res.trace);
                };
            }
            const auto records = rqn::run_matrix(spec, visit);
            rqn::emit_csv(records, out_path);

            std::size_t converged = 0;
            for (const auto& r : records) converged += r.status == rqn::SolveStatus::converged;
            std::cout << records.size() << " runs, " << converged << " converged -> " << out_path << '\n';
        } else if (*prof) {
            const auto records = rqn::load_runs_csv(in_path);
            std::vector<std::string> names;
            for (const auto& r : records)
                if (std::find(names.begin(), names.end(), r.solver) == names.end()) names.push_back(r.solver);
            const auto profile = rqn::performance_profile(rqn::aggregate_seeds(records), names);
            rqn::emit_csv(profile, profile_out);
            if (!svg_out.empty()) rqn::emit_svg(profile, svg_out);
            std::cout << "profile over " << profile.counted_problems << " problems; " << profile.dropped_problems.size()
                      << " dropped (every solver failed)\n";
            for (const auto& c : profile.curves) {
                std::cout << "  " << c.solver << ": rho(1)=" << c.rho_at(1.0) << " rho(inf)="
                          << (c.points.empty() ? 0.0 : c.points.back().rho) << '\n';
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
