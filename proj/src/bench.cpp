#include "rqn/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace rqn {
namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number in CSV: " + s);
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

auto record_key(const RunRecord& r) { return std::tie(r.problem, r.solver, r.seed); }

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    return os;
}

}  // namespace

double ProfileCurve::rho_at(double tau) const {
    double rho = 0.0;
    for (const auto& p : points) {
        if (p.tau <= tau) rho = p.rho;
        else break;
    }
    return rho;
}

std::uint64_t noise_seed(const std::string& problem, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : problem) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(h ^ splitmix64(seed));
}

RunRecord make_record(const std::string& problem, Variant solver, std::uint64_t seed, const SolveResult& res,
                      double wall_ms, CallMetric metric) {
    RunRecord r;
    r.problem = problem;
    r.solver = to_string(solver);
    r.seed = seed;
    r.status = res.status;
    r.f_calls = res.f_calls;
    r.g_calls = res.g_calls;
    if (res.status == SolveStatus::converged) {
        r.oracle_calls = static_cast<double>(metric == CallMetric::total ? res.f_calls + res.g_calls : res.f_calls);
    }
    r.iters = res.iterations();
    r.final_f_bar = res.final_f_bar;
    r.final_g_inf = res.final_g_inf;
    r.wall_ms = wall_ms;
    return r;
}

std::vector<RunRecord> run_matrix(const MatrixSpec& spec, const RunVisitor& visit) {
    std::vector<const ObjectiveProblem*> problems;
    for (const auto& name : spec.problems) {
        try {
            problems.push_back(&find_problem(name));
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("unknown problem: " + name);
        }
    }
    spec.noise.validate();
    const double eps_f = spec.eps_f < 0.0 ? default_eps_f(spec.noise) : spec.eps_f;

    struct Task {
        const ObjectiveProblem* problem;
        Variant solver;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const auto* p : problems)
        for (auto s : spec.solvers)
            for (auto seed : spec.seeds) tasks.push_back({p, s, seed});

    std::vector<RunRecord> out(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const Task& t = tasks[i];
            SolverConfig cfg;
            cfg.k_max = spec.k_max;
            cfg.eps_gtol = spec.eps_gtol;
            cfg.eps_f = eps_f;
            cfg.variant = t.solver;
            cfg.time_budget_s = spec.time_budget_s;
            cfg.fresh_fk = spec.fresh_fk;
            NoiseModel noise = spec.noise;
            noise.seed = noise_seed(t.problem->name, t.seed);

            const auto start = std::chrono::steady_clock::now();
            SolveResult res = solve(*t.problem, noise, cfg);
            const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            out[i] = make_record(t.problem->name, t.solver, t.seed, res, ms, spec.metric);
            if (visit) visit(out[i], res);
        }
    };

    const int jobs = std::max(1, std::min<int>(spec.jobs, static_cast<int>(tasks.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::sort(out.begin(), out.end(), [](const RunRecord& a, const RunRecord& b) { return record_key(a) < record_key(b); });
    return out;
}

std::vector<RunRecord> aggregate_seeds(const std::vector<RunRecord>& records) {
    std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> groups;
    for (const auto& r : records) groups[{r.problem, r.solver}].push_back(&r);

    std::vector<RunRecord> out;
    for (const auto& [key, runs] : groups) {
        std::vector<double> calls;
        for (const auto* r : runs)
            if (r->status == SolveStatus::converged) calls.push_back(r->oracle_calls);

        RunRecord agg = *runs.front();
        agg.seed = 0;
        const std::size_t failed = runs.size() - calls.size();
        if (2 * failed > runs.size() || calls.empty()) {
            agg.oracle_calls = kFailedCalls;
            for (const auto* r : runs) {
                if (r->status != SolveStatus::converged) {
                    agg.status = r->status;
                    break;
                }
            }
        } else {
            std::sort(calls.begin(), calls.end());
            const std::size_t m = calls.size();
            agg.oracle_calls = m % 2 ? calls[m / 2] : 0.5 * (calls[m / 2 - 1] + calls[m / 2]);
            agg.status = SolveStatus::converged;
        }
        out.push_back(std::move(agg));
    }
    return out;
}

ProfileResult performance_profile(const std::vector<RunRecord>& records, const std::vector<std::string>& solvers) {
    std::map<std::string, std::map<std::string, double>> calls;  // problem -> solver -> n_{p,s}
    std::set<std::string> problems;
    for (const auto& r : records) {
        problems.insert(r.problem);
        if (std::find(solvers.begin(), solvers.end(), r.solver) == solvers.end()) continue;
        auto [it, inserted] = calls[r.problem].emplace(r.solver, r.oracle_calls);
        if (!inserted) {
            throw std::invalid_argument("performance_profile: duplicate entry for " + r.problem + "/" + r.solver +
                                        " (aggregate seeds first)");
        }
    }

    ProfileResult result;
    std::map<std::string, std::vector<double>> ratios;
    std::set<double> taus{1.0};
    for (const auto& p : problems) {
        double best = kFailedCalls;
        for (const auto& s : solvers) {
            auto it = calls[p].find(s);
            if (it != calls[p].end() && std::isfinite(it->second) && it->second > 0.0) best = std::min(best, it->second);
        }
        if (!std::isfinite(best)) {
            result.dropped_problems.push_back(p);
            continue;
        }
        ++result.counted_problems;
        for (const auto& s : solvers) {
            auto it = calls[p].find(s);
            const double n = it == calls[p].end() ? kFailedCalls : it->second;
            const double r = std::isfinite(n) ? n / best : kFailedCalls;
            ratios[s].push_back(r);
            if (std::isfinite(r)) taus.insert(r);
        }
    }

    for (const auto& s : solvers) {
        ProfileCurve curve;
        curve.solver = s;
        for (double tau : taus) {
            double count = 0.0;
            for (double r : ratios[s]) count += r <= tau;
            const double rho = result.counted_problems ? count / result.counted_problems : 0.0;
            curve.points.push_back({tau, rho});
        }
        result.curves.push_back(std::move(curve));
    }
    return result;
}

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& records) {
    os << kRunsHeader << '\n';
    for (const auto& r : records) {
        os << r.problem << ',' << r.solver << ',' << r.seed << ',' << to_string(r.status) << ','
           << fmt_double(r.oracle_calls) << ',' << r.f_calls << ',' << r.g_calls << ',' << r.iters << ','
           << fmt_double(r.final_f_bar) << ',' << fmt_double(r.final_g_inf) << ',' << fmt_double(r.wall_ms) << '\n';
    }
}

std::vector<RunRecord> read_runs_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kRunsHeader) throw std::runtime_error("runs CSV: unexpected header");
    std::vector<RunRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 11) throw std::runtime_error("runs CSV: expected 11 columns in: " + line);
        RunRecord r;
        r.problem = cells[0];
        r.solver = cells[1];
        r.seed = std::stoull(cells[2]);
        r.status = parse_status(cells[3]);
        r.oracle_calls = parse_double(cells[4]);
        r.f_calls = std::stoull(cells[5]);
        r.g_calls = std::stoull(cells[6]);
        r.iters = std::stoi(cells[7]);
        r.final_f_bar = parse_double(cells[8]);
        r.final_g_inf = parse_double(cells[9]);
        r.wall_ms = parse_double(cells[10]);
        out.push_back(std::move(r));
    }
    return out;
}

void write_trace_csv(std::ostream& os, const std::vector<IterationRecord>& trace) {
    os << kTraceHeader << '\n';
    for (const auto& r : trace) {
        os << r.k << ',' << fmt_double(r.f_bar) << ',' << fmt_double(r.g_inf) << ',' << fmt_double(r.g_two) << ','
           << fmt_double(r.mu) << ',' << fmt_double(r.alpha) << ',' << fmt_double(r.delta) << ',' << to_string(r.set)
           << ',' << r.rejections << ',' << r.f_calls << ',' << r.g_calls << '\n';
    }
}

void write_profile_csv(std::ostream& os, const ProfileResult& profile) {
    os << kProfileHeader << '\n';
    for (const auto& c : profile.curves)
        for (const auto& p : c.points) os << c.solver << ',' << fmt_double(p.tau) << ',' << fmt_double(p.rho) << '\n';
}

void write_profile_svg(std::ostream& os, const ProfileResult& profile) {
    constexpr double width = 640, height = 420, left = 60, right = 160, top = 20, bottom = 50;
    constexpr double plot_w = width - left - right, plot_h = height - top - bottom;
    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    double tau_max = 2.0;
    for (const auto& c : profile.curves)
        for (const auto& p : c.points) tau_max = std::max(tau_max, p.tau);
    tau_max *= 1.25;
    const double log_max = std::log10(tau_max);
    auto px = [&](double tau) { return left + plot_w * std::log10(tau) / log_max; };
    auto py = [&](double rho) { return top + plot_h * (1.0 - rho); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<desc>performance profile; counted_problems=" << profile.counted_problems
       << " dropped_problems=" << profile.dropped_problems.size() << "</desc>\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<g stroke=\"black\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << left << "\" y1=\"" << py(0) << "\" x2=\"" << left + plot_w << "\" y2=\"" << py(0) << "\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << py(0) << "\" x2=\"" << left << "\" y2=\"" << py(1) << "\"/>\n";
    os << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (double decade = 1.0; decade <= tau_max; decade *= 10.0) {
        os << "<text x=\"" << px(decade) << "\" y=\"" << py(0) + 15 << "\" text-anchor=\"middle\">" << fmt_short(decade)
           << "</text>\n";
    }
    for (double rho : {0.0, 0.5, 1.0}) {
        os << "<text x=\"" << left - 6 << "\" y=\"" << py(rho) + 4 << "\" text-anchor=\"end\">" << fmt_short(rho)
           << "</text>\n";
    }
    os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">tau (log scale)</text>\n";
    os << "</g>\n";

    for (std::size_t i = 0; i < profile.curves.size(); ++i) {
        const auto& c = profile.curves[i];
        const char* color = palette[i % std::size(palette)];
        std::ostringstream pts;
        double prev_rho = 0.0;
        bool first = true;
        for (const auto& p : c.points) {
            if (first) {
                pts << fmt_short(px(p.tau)) << ',' << fmt_short(py(p.rho));
                first = false;
            } else {
                pts << ' ' << fmt_short(px(p.tau)) << ',' << fmt_short(py(prev_rho)) << ' ' << fmt_short(px(p.tau))
                    << ',' << fmt_short(py(p.rho));
            }
            prev_rho = p.rho;
        }
        pts << ' ' << fmt_short(px(tau_max)) << ',' << fmt_short(py(prev_rho));
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << pts.str() << "\"/>\n";
        os << "<text x=\"" << left + plot_w + 10 << "\" y=\"" << top + 16 * (i + 1) << "\" fill=\"" << color
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << c.solver << "</text>\n";
    }
    os << "</svg>\n";
}

void emit_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path) {
    auto os = open_out(path);
    write_runs_csv(os, records);
}

void emit_csv(const ProfileResult& profile, const std::filesystem::path& path) {
    auto os = open_out(path);
    write_profile_csv(os, profile);
}

void emit_svg(const ProfileResult& profile, const std::filesystem::path& path) {
    auto os = open_out(path);
    write_profile_svg(os, profile);
}

std::vector<RunRecord> load_runs_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
    return read_runs_csv(is);
}

}  // namespace rqn
