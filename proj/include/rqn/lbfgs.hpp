#pragma once

#include "rqn/problems.hpp"

#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>

namespace rqn {

/// Powell's damping constant: damped pairs satisfy y_bar's = sigma * gamma * ||s||^2 at worst.
inline constexpr double kPowellSigma = 0.2;

/// Acceptance region for stored pairs: y's >= lambda ||s||^2 and y's >= ||y||^2 / Lambda.
struct ScreenConstants {
    double lambda = 1e-10;
    double Lambda = 1e10;
};

struct CurvaturePair {
    Vector s;
    Vector y_bar;
    double sy = 0.0;  ///< y_bar's
    double yy = 0.0;  ///< ||y_bar||^2
    double ss = 0.0;  ///< ||s||^2

    static CurvaturePair make(Vector s, Vector y_bar);
};

/// Damped gradient difference theta * y + (1 - theta) * gamma * s.
/// Returns nullopt when s is zero (the pair has to be dropped).
std::optional<Vector> powell_damp(const Vector& s, const Vector& y, double gamma);

/// True when the pair is finite, s != 0, and it lies in the screening region.
bool screen_pair(const Vector& s, const Vector& y_bar, const ScreenConstants& screen = {});

/// Function-value based secant modification
/// y + (theta / ||s||^2) s,  theta = 2 (f_k - f_k1) + (g_k + g_k1)'s.
/// Falls back to y when |theta| > 0.1 |y's| or the modified pair loses positive curvature.
Vector modified_secant(const Vector& y, const Vector& s, double f_k, double f_k1, const Vector& g_k,
                       const Vector& g_k1);

/// Ring buffer of screened curvature pairs.
class LbfgsMemory {
public:
    explicit LbfgsMemory(std::size_t capacity = 10);

    std::size_t capacity() const { return capacity_; }
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }
    void clear() { pairs_.clear(); }

    /// Oldest first.
    const std::deque<CurvaturePair>& pairs() const { return pairs_; }

    /// ||y_0||^2 / y_0's_0 of the oldest pair, 1 when empty.
    double gamma() const;
    /// Initial scaling for the shifted pairs (s, y_bar + mu s); 1 + mu when empty.
    double gamma(double mu) const;

    /// Appends a pair, evicting the oldest one at capacity.
    void push(CurvaturePair pair);

    /// -H g, with H the inverse of the BFGS matrix built from the shifted
    /// pairs (s_i, y_bar_i + mu s_i) and initial matrix gamma(mu) I.
    /// Runs the two-loop recursion without forming the shifted vectors.
    Vector two_loop_direction(const Vector& g, double mu) const;

    /// Dense BFGS matrix of the shifted pairs, by explicit rank-two updates.
    /// Test oracle; n is limited to 50.
    Matrix materialize_dense(double mu, int n) const;

private:
    std::size_t capacity_;
    std::deque<CurvaturePair> pairs_;
};

/// Dense BFGS matrix of the given pairs from gamma I, for pair sets built outside a memory.
Matrix bfgs_dense(const std::deque<CurvaturePair>& pairs, double gamma, int n);

}  // namespace rqn
