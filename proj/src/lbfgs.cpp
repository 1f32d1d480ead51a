#include "rqn/lbfgs.hpp"

#include <cmath>
#include <vector>

namespace rqn {

CurvaturePair CurvaturePair::make(Vector s, Vector y_bar) {
    CurvaturePair p;
    p.sy = y_bar.dot(s);
    p.yy = y_bar.squaredNorm();
    p.ss = s.squaredNorm();
    p.s = std::move(s);
    p.y_bar = std::move(y_bar);
    return p;
}

std::optional<Vector> powell_damp(const Vector& s, const Vector& y, double gamma) {
    const double ss = s.squaredNorm();
    if (!(ss > 0.0)) return std::nullopt;
    const double sy = s.dot(y);
    const double sbs = gamma * ss;
    if (sy >= kPowellSigma * sbs) return y;
    const double theta = (1.0 - kPowellSigma) * sbs / (sbs - sy);
    return Vector(theta * y + (1.0 - theta) * gamma * s);
}

bool screen_pair(const Vector& s, const Vector& y_bar, const ScreenConstants& screen) {
    if (!s.allFinite() || !y_bar.allFinite()) return false;
    const double ss = s.squaredNorm();
    if (!(ss > 0.0)) return false;
    const double sy = y_bar.dot(s);
    const double yy = y_bar.squaredNorm();
    return sy >= screen.lambda * ss && sy >= yy / screen.Lambda;
}

Vector modified_secant(const Vector& y, const Vector& s, double f_k, double f_k1, const Vector& g_k,
                       const Vector& g_k1) {
    const double ss = s.squaredNorm();
    if (!(ss > 0.0)) return y;
    const double ys = y.dot(s);
    const double theta = 2.0 * (f_k - f_k1) + (g_k + g_k1).dot(s);
    if (!std::isfinite(theta) || std::fabs(theta) > 0.1 * std::fabs(ys)) return y;
    Vector y_mod = y + (theta / ss) * s;
    if (!(y_mod.dot(s) > 0.0)) return y;
    return y_mod;
}

LbfgsMemory::LbfgsMemory(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("L-BFGS memory capacity must be positive");
}

double LbfgsMemory::gamma() const {
    if (pairs_.empty()) return 1.0;
    const auto& p = pairs_.front();
    return p.yy / p.sy;
}

double LbfgsMemory::gamma(double mu) const {
    if (pairs_.empty()) return 1.0 + mu;
    const auto& p = pairs_.front();
    const double sy = p.sy + mu * p.ss;
    const double yy = p.yy + 2.0 * mu * p.sy + mu * mu * p.ss;
    return yy / sy;
}

void LbfgsMemory::push(CurvaturePair pair) {
    if (pairs_.size() == capacity_) pairs_.pop_front();
    pairs_.push_back(std::move(pair));
}

Vector LbfgsMemory::two_loop_direction(const Vector& g, double mu) const {
    if (pairs_.empty()) return -g / (1.0 + mu);

    const std::size_t m = pairs_.size();
    std::vector<double> rho(m), a(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double sy = pairs_[i].sy + mu * pairs_[i].ss;
        if (!(sy > 0.0)) throw std::logic_error("two_loop_direction: shifted pair lost positive curvature");
        rho[i] = 1.0 / sy;
    }

    // (y_bar + mu s)'v = y_bar'v + mu s'v
    Vector q = g;
    for (std::size_t i = m; i-- > 0;) {
        const auto& p = pairs_[i];
        const double sq = p.s.dot(q);
        a[i] = rho[i] * sq;
        q.noalias() -= a[i] * p.y_bar;
        q.noalias() -= (a[i] * mu) * p.s;
    }
    q /= gamma(mu);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& p = pairs_[i];
        const double b = rho[i] * (p.y_bar.dot(q) + mu * p.s.dot(q));
        q.noalias() += (a[i] - b) * p.s;
    }
    return -q;
}

Matrix bfgs_dense(const std::deque<CurvaturePair>& pairs, double gamma, int n) {
    Matrix B = gamma * Matrix::Identity(n, n);
    for (const auto& p : pairs) {
        const Vector Bs = B * p.s;
        const double sBs = p.s.dot(Bs);
        const double ys = p.y_bar.dot(p.s);
        if (!(sBs > 0.0) || !(ys > 0.0)) throw std::domain_error("bfgs_dense: degenerate update");
        B += -(Bs * Bs.transpose()) / sBs + (p.y_bar * p.y_bar.transpose()) / ys;
    }
    return B;
}

Matrix LbfgsMemory::materialize_dense(double mu, int n) const {
    if (n > 50) throw std::invalid_argument("materialize_dense is limited to n <= 50");
    std::deque<CurvaturePair> shifted;
    for (const auto& p : pairs_) shifted.push_back(CurvaturePair::make(p.s, p.y_bar + mu * p.s));
    return bfgs_dense(shifted, gamma(mu), n);
}

}  // namespace rqn
