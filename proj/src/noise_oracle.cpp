#include "rqn/noise_oracle.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rqn {

NoiseModel NoiseModel::uniform(double level, std::uint64_t seed) {
    NoiseModel m;
    m.kind = NoiseKind::additive_uniform;
    m.level = level;
    m.seed = seed;
    return m;
}

NoiseModel NoiseModel::cast(int bits) {
    NoiseModel m;
    m.kind = NoiseKind::precision_cast;
    m.bits = bits;
    return m;
}

void NoiseModel::validate() const {
    if (kind == NoiseKind::additive_uniform && !(level > 0.0 && std::isfinite(level))) {
        throw std::invalid_argument("additive noise level must be positive and finite");
    }
    if (kind == NoiseKind::precision_cast && bits != 64 && bits != 32 && bits != 16) {
        throw std::invalid_argument("precision cast supports 64, 32 or 16 bits");
    }
}

std::string NoiseModel::describe() const {
    std::ostringstream os;
    switch (kind) {
        case NoiseKind::exact: os << "exact"; break;
        case NoiseKind::additive_uniform: os << "uniform:" << level; break;
        case NoiseKind::precision_cast: os << "cast:" << bits; break;
    }
    return os.str();
}

double default_eps_f(const NoiseModel& model) {
    switch (model.kind) {
        case NoiseKind::exact: return 0.0;
        case NoiseKind::additive_uniform: return 1e-2;
        case NoiseKind::precision_cast:
            switch (model.bits) {
                case 64: return 2.22e-9;
                case 32: return 1.19e-3;
                case 16: return 9.77e-2;
                default: break;
            }
            break;
    }
    throw std::invalid_argument("default_eps_f: unsupported noise model " + model.describe());
}

double round_to_binary16(double v) {
    if (!std::isfinite(v) || v == 0.0) return v;
    constexpr double max_half = 65504.0;
    const double a = std::fabs(v);
    int exp2 = 0;
    std::frexp(a, &exp2);  // a = m * 2^exp2, m in [0.5, 1)
    // Unit in the last place: 10 fraction bits for normals, fixed 2^-24 below 2^-14.
    const int ulp_exp = exp2 - 1 >= -14 ? exp2 - 1 - 10 : -24;
    const double ulp = std::ldexp(1.0, ulp_exp);
    double r = std::nearbyint(a / ulp) * ulp;  // default rounding mode: ties to even
    if (r > max_half) r = std::numeric_limits<double>::infinity();
    return std::copysign(r, v);
}

double round_to_binary32(double v) { return static_cast<double>(static_cast<float>(v)); }

std::uint64_t splitmix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    return splitmix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
}

double CounterRng::symmetric(double half_width) {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return half_width * (2.0 * u - 1.0);
}

NoisyOracle::NoisyOracle(const ObjectiveProblem& problem, NoiseModel model, double eps_f)
    : problem_(&problem), model_(model), eps_f_(eps_f), rng_(splitmix64(model.seed)) {
    model_.validate();
    if (!(eps_f >= 0.0 && eps_f < 1.0)) throw std::invalid_argument("eps_f must lie in [0, 1)");
}

Vector NoisyOracle::cast_input(const Vector& x) const {
    if (model_.kind != NoiseKind::precision_cast || model_.bits == 64) return x;
    if (model_.bits == 32) return x.unaryExpr([](double v) { return round_to_binary32(v); });
    return x.unaryExpr([](double v) { return round_to_binary16(v); });
}

double NoisyOracle::f_bar(const Vector& x) {
    ++f_calls_;
    double value = problem_->f(cast_input(x));
    if (model_.kind == NoiseKind::additive_uniform) value += rng_.symmetric(model_.level);
    if (!std::isfinite(value)) {
        throw OracleError(problem_->name + ": non-finite objective under " + model_.describe(), x, model_.kind);
    }
    return value;
}

Vector NoisyOracle::grad_bar(const Vector& x) {
    ++g_calls_;
    Vector g = problem_->grad(cast_input(x));
    if (model_.kind == NoiseKind::additive_uniform) {
        if (model_.grad_mode == GradNoiseMode::rank1) {
            g.array() += rng_.symmetric(model_.level);
        } else {
            for (Eigen::Index i = 0; i < g.size(); ++i) g[i] += rng_.symmetric(model_.level);
        }
    }
    if (!g.allFinite()) {
        throw OracleError(problem_->name + ": non-finite gradient under " + model_.describe(), x, model_.kind);
    }
    return g;
}

}  // namespace rqn
