#pragma once

#include "rqn/problems.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rqn {

enum class NoiseKind { exact, additive_uniform, precision_cast };

/// How additive noise is applied to gradients: an independent draw per
/// component, or one draw shared by every component.
enum class GradNoiseMode { percomp, rank1 };

struct NoiseModel {
    NoiseKind kind = NoiseKind::exact;
    double level = 0.0;  ///< additive_uniform only; > 0
    int bits = 64;       ///< precision_cast only; 64, 32 or 16
    std::uint64_t seed = 0;
    GradNoiseMode grad_mode = GradNoiseMode::percomp;

    static NoiseModel exact() { return {}; }
    static NoiseModel uniform(double level, std::uint64_t seed = 0);
    static NoiseModel cast(int bits);

    /// Throws std::invalid_argument when the parameters are out of range.
    void validate() const;
    std::string describe() const;
};

/// Error rate used in the relaxed Armijo test when none is configured:
/// exact 0, additive 1e-2, and 2.22e-9 / 1.19e-3 / 9.77e-2 for 64/32/16-bit inputs.
double default_eps_f(const NoiseModel& model);

/// Nearest IEEE-754 binary16 value (ties to even, gradual underflow).
/// Magnitudes that round past the largest finite half return +-infinity.
double round_to_binary16(double v);
/// Nearest IEEE-754 binary32 value.
double round_to_binary32(double v);

/// Counter-based generator: draw i of stream `key` is splitmix64(key + (i+1) * golden).
/// Streams are reproducible across platforms and independent of call timing.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}
    std::uint64_t next_u64();
    /// Uniform on [-half_width, half_width).
    double symmetric(double half_width);
    std::uint64_t draws() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t z);

/// Raised on a non-finite objective or gradient; carries the point and the model.
class OracleError : public std::runtime_error {
public:
    OracleError(const std::string& what, Vector x, NoiseKind kind)
        : std::runtime_error(what), x_(std::move(x)), kind_(kind) {}
    const Vector& x() const { return x_; }
    NoiseKind kind() const { return kind_; }

private:
    Vector x_;
    NoiseKind kind_;
};

/// The only evaluation surface a solver sees. Applies the noise model to
/// the wrapped problem and counts every evaluation. One instance belongs to
/// one worker: the counters and the random stream are mutable.
class NoisyOracle {
public:
    /// eps_f must lie in [0, 1).
    NoisyOracle(const ObjectiveProblem& problem, NoiseModel model, double eps_f);

    double f_bar(const Vector& x);
    Vector grad_bar(const Vector& x);

    const ObjectiveProblem& problem() const { return *problem_; }
    const NoiseModel& model() const { return model_; }
    double eps_f() const { return eps_f_; }
    std::uint64_t f_calls() const { return f_calls_; }
    std::uint64_t g_calls() const { return g_calls_; }

private:
    Vector cast_input(const Vector& x) const;

    const ObjectiveProblem* problem_;
    NoiseModel model_;
    double eps_f_;
    CounterRng rng_;
    std::uint64_t f_calls_ = 0;
    std::uint64_t g_calls_ = 0;
};

}  // namespace rqn
