#pragma once
// Random curvature-pair sets for property tests.

#include "rqn/lbfgs.hpp"

#include <Eigen/Eigenvalues>
#include <random>

namespace rqn::testing {

/// Symmetric matrix with eigenvalues drawn uniformly from [lo, hi].
inline Matrix random_spd(int n, double lo, double hi, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> eig(lo, hi);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    Eigen::HouseholderQR<Matrix> qr(a);
    const Matrix q = qr.householderQ();
    Vector d(n);
    for (int i = 0; i < n; ++i) d[i] = eig(rng);
    return q * d.asDiagonal() * q.transpose();
}

inline Vector random_vector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
}

/// Up to `max_pairs` pairs y = A_i s with a fresh A_i per pair whose spectrum lies
/// in [lo, hi]; every pair then satisfies y's >= lo ||s||^2 and y's >= ||y||^2 / hi.
inline LbfgsMemory random_memory(int n, int max_pairs, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(1, max_pairs);
    std::uniform_real_distribution<double> scale(-2.0, 1.0);
    LbfgsMemory mem(static_cast<std::size_t>(max_pairs));
    const int p = count(rng);
    for (int i = 0; i < p; ++i) {
        const Vector s = random_vector(n, rng) * std::pow(10.0, scale(rng));
        const Matrix a = random_spd(n, lo, hi, rng);
        mem.push(CurvaturePair::make(s, a * s));
    }
    return mem;
}

}  // namespace rqn::testing
