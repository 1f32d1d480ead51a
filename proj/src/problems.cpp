#include "rqn/problems.hpp"

#include <cmath>
#include <string>

namespace rqn {
namespace {

std::string sized(const char* family, int n) { return std::string(family) + "_n" + std::to_string(n); }

void require_multiple(int n, int k, const char* family) {
    if (n <= 0 || n % k != 0) {
        throw std::invalid_argument(std::string(family) + ": dimension must be a positive multiple of " +
                                    std::to_string(k));
    }
}

ObjectiveProblem diagonal_quadratic(std::string name, Vector weights) {
    const auto n = static_cast<int>(weights.size());
    ObjectiveProblem p;
    p.name = std::move(name);
    p.dim = n;
    p.f = [weights](const Vector& x) { return 0.5 * (weights.array() * x.array().square()).sum(); };
    p.grad = [weights](const Vector& x) -> Vector { return weights.cwiseProduct(x); };
    p.x0 = Vector::Ones(n);
    p.f_star = 0.0;
    return p;
}

}  // namespace

ObjectiveProblem make_sphere(int n) { return diagonal_quadratic(sized("sphere", n), Vector::Ones(n)); }

ObjectiveProblem make_illcond_quadratic(int n) {
    return diagonal_quadratic(sized("illcond_quadratic", n), Vector::LinSpaced(n, 1.0, n));
}

// Eigenvalues log-spaced over [1e-2, 1e2].
ObjectiveProblem make_logeig_quadratic(int n) {
    Vector w(n);
    for (int i = 0; i < n; ++i) {
        const double t = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
        w[i] = std::pow(10.0, -2.0 + 4.0 * t);
    }
    return diagonal_quadratic(sized("logeig_quadratic", n), std::move(w));
}

ObjectiveProblem make_extended_rosenbrock(int n) {
    require_multiple(n, 2, "rosenbrock");
    ObjectiveProblem p;
    p.name = sized("rosenbrock", n);
    p.dim = n;
    p.f = [n](const Vector& x) {
        double sum = 0.0;
        for (int i = 0; i < n; i += 2) {
            const double a = x[i + 1] - x[i] * x[i];
            const double b = 1.0 - x[i];
            sum += 100.0 * a * a + b * b;
        }
        return sum;
    };
    p.grad = [n](const Vector& x) -> Vector {
        Vector g(n);
        for (int i = 0; i < n; i += 2) {
            const double a = x[i + 1] - x[i] * x[i];
            g[i] = -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
            g[i + 1] = 200.0 * a;
        }
        return g;
    };
    p.x0.resize(n);
    for (int i = 0; i < n; i += 2) {
        p.x0[i] = -1.2;
        p.x0[i + 1] = 1.0;
    }
    p.f_star = 0.0;
    return p;
}

ObjectiveProblem make_chained_rosenbrock(int n) {
    require_multiple(n, 2, "chained_rosenbrock");
    ObjectiveProblem p;
    p.name = sized("chained_rosenbrock", n);
    p.dim = n;
    p.f = [n](const Vector& x) {
        double sum = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            const double a = x[i + 1] - x[i] * x[i];
            const double b = 1.0 - x[i];
            sum += 100.0 * a * a + b * b;
        }
        return sum;
    };
    p.grad = [n](const Vector& x) -> Vector {
        Vector g = Vector::Zero(n);
        for (int i = 0; i + 1 < n; ++i) {
            const double a = x[i + 1] - x[i] * x[i];
            g[i] += -400.0 * x[i] * a - 2.0 * (1.0 - x[i]);
            g[i + 1] += 200.0 * a;
        }
        return g;
    };
    p.x0.resize(n);
    for (int i = 0; i < n; ++i) p.x0[i] = (i % 2 == 0) ? -1.2 : 1.0;
    p.f_star = 0.0;
    return p;
}

ObjectiveProblem make_extended_beale(int n) {
    require_multiple(n, 2, "beale");
    ObjectiveProblem p;
    p.name = sized("beale", n);
    p.dim = n;
    p.f = [n](const Vector& x) {
        double sum = 0.0;
        for (int i = 0; i < n; i += 2) {
            const double u = x[i], v = x[i + 1];
            const double t1 = 1.5 - u + u * v;
            const double t2 = 2.25 - u + u * v * v;
            const double t3 = 2.625 - u + u * v * v * v;
            sum += t1 * t1 + t2 * t2 + t3 * t3;
        }
        return sum;
    };
    p.grad = [n](const Vector& x) -> Vector {
        Vector g(n);
        for (int i = 0; i < n; i += 2) {
            const double u = x[i], v = x[i + 1];
            const double t1 = 1.5 - u + u * v;
            const double t2 = 2.25 - u + u * v * v;
            const double t3 = 2.625 - u + u * v * v * v;
            g[i] = 2.0 * (t1 * (v - 1.0) + t2 * (v * v - 1.0) + t3 * (v * v * v - 1.0));
            g[i + 1] = 2.0 * (t1 * u + t2 * 2.0 * u * v + t3 * 3.0 * u * v * v);
        }
        return g;
    };
    p.x0 = Vector::Ones(n);
    p.f_star = 0.0;
    return p;
}

ObjectiveProblem make_extended_wood(int n) {
    require_multiple(n, 4, "wood");
    ObjectiveProblem p;
    p.name = sized("wood", n);
    p.dim = n;
    p.f = [n](const Vector& x) {
        double sum = 0.0;
        for (int i = 0; i < n; i += 4) {
            const double x1 = x[i], x2 = x[i + 1], x3 = x[i + 2], x4 = x[i + 3];
            const double a = x2 - x1 * x1, b = x4 - x3 * x3;
            sum += 100.0 * a * a + (1.0 - x1) * (1.0 - x1) + 90.0 * b * b + (1.0 - x3) * (1.0 - x3) +
                   10.1 * ((x2 - 1.0) * (x2 - 1.0) + (x4 - 1.0) * (x4 - 1.0)) + 19.8 * (x2 - 1.0) * (x4 - 1.0);
        }
        return sum;
    };
    p.grad = [n](const Vector& x) -> Vector {
        Vector g(n);
        for (int i = 0; i < n; i += 4) {
            const double x1 = x[i], x2 = x[i + 1], x3 = x[i + 2], x4 = x[i + 3];
            const double a = x2 - x1 * x1, b = x4 - x3 * x3;
            g[i] = -400.0 * x1 * a - 2.0 * (1.0 - x1);
            g[i + 1] = 200.0 * a + 20.2 * (x2 - 1.0) + 19.8 * (x4 - 1.0);
            g[i + 2] = -360.0 * x3 * b - 2.0 * (1.0 - x3);
            g[i + 3] = 180.0 * b + 20.2 * (x4 - 1.0) + 19.8 * (x2 - 1.0);
        }
        return g;
    };
    p.x0.resize(n);
    for (int i = 0; i < n; i += 4) {
        p.x0[i] = -3.0;
        p.x0[i + 1] = -1.0;
        p.x0[i + 2] = -3.0;
        p.x0[i + 3] = -1.0;
    }
    p.f_star = 0.0;
    return p;
}

ObjectiveProblem make_extended_powell(int n) {
    require_multiple(n, 4, "powell_singular");
    ObjectiveProblem p;
    p.name = sized("powell_singular", n);
    p.dim = n;
    p.f = [n](const Vector& x) {
        double sum = 0.0;
        for (int i = 0; i < n; i += 4) {
            const double a = x[i] + 10.0 * x[i + 1];
            const double b = x[i + 2] - x[i + 3];
            const double c = x[i + 1] - 2.0 * x[i + 2];
            const double d = x[i] - x[i + 3];
            sum += a * a + 5.0 * b * b + c * c * c * c + 10.0 * d * d * d * d;
        }
        return sum;
    };
    p.grad = [n](const Vector& x) -> Vector {
        Vector g(n);
        for (int i = 0; i < n; i += 4) {
            const double a = x[i] + 10.0 * x[i + 1];
            const double b = x[i + 2] - x[i + 3];
            const double c3 = std::pow(x[i + 1] - 2.0 * x[i + 2], 3);
            const double d3 = std::pow(x[i] - x[i + 3], 3);
            g[i] = 2.0 * a + 40.0 * d3;
            g[i + 1] = 20.0 * a + 4.0 * c3;
            g[i + 2] = 10.0 * b - 8.0 * c3;
            g[i + 3] = -10.0 * b - 40.0 * d3;
        }
        return g;
    };
    p.x0.resize(n);
    for (int i = 0; i < n; i += 4) {
        p.x0[i] = 3.0;
        p.x0[i + 1] = -1.0;
        p.x0[i + 2] = 0.0;
        p.x0[i + 3] = 1.0;
    }
    p.f_star = 0.0;
    return p;
}

ObjectiveProblem make_dixon_price(int n) {
    ObjectiveProblem p;
    p.name = sized("dixon_price", n);
    p.dim = n;
    p.f = [n](const Vector& x) {
        double sum = (x[0] - 1.0) * (x[0] - 1.0);
        for (int i = 1; i < n; ++i) {
            const double t = 2.0 * x[i] * x[i] - x[i - 1];
            sum += (i + 1) * t * t;
        }
        return sum;
    };
    p.grad = [n](const Vector& x) -> Vector {
        Vector g = Vector::Zero(n);
        g[0] = 2.0 * (x[0] - 1.0);
        for (int i = 1; i < n; ++i) {
            const double t = 2.0 * x[i] * x[i] - x[i - 1];
            g[i] += 2.0 * (i + 1) * t * 4.0 * x[i];
            g[i - 1] -= 2.0 * (i + 1) * t;
        }
        return g;
    };
    p.x0 = Vector::Ones(n);
    p.f_star = 0.0;
    return p;
}

// Residuals r_i = n - sum_j cos x_j + i (1 - cos x_i) - sin x_i, i = 1..n.
ObjectiveProblem make_trigonometric(int n) {
    ObjectiveProblem p;
    p.name = sized("trigonometric", n);
    p.dim = n;
    auto residuals = [n](const Vector& x) {
        const double cos_sum = x.array().cos().sum();
        Vector r(n);
        for (int i = 0; i < n; ++i) {
            r[i] = n - cos_sum + (i + 1) * (1.0 - std::cos(x[i])) - std::sin(x[i]);
        }
        return r;
    };
    p.f = [residuals](const Vector& x) { return residuals(x).squaredNorm(); };
    p.grad = [n, residuals](const Vector& x) -> Vector {
        const Vector r = residuals(x);
        const double r_sum = r.sum();
        Vector g(n);
        for (int j = 0; j < n; ++j) {
            g[j] = 2.0 * r_sum * std::sin(x[j]) + 2.0 * r[j] * ((j + 1) * std::sin(x[j]) - std::cos(x[j]));
        }
        return g;
    };
    p.x0 = Vector::Constant(n, 1.0 / n);
    p.f_star = 0.0;
    return p;
}

// Residuals r_i = (3 - 2 x_i) x_i - x_{i-1} - 2 x_{i+1} + 1 with zero boundary values.
ObjectiveProblem make_broyden_tridiagonal(int n) {
    ObjectiveProblem p;
    p.name = sized("broyden_tridiagonal", n);
    p.dim = n;
    auto residuals = [n](const Vector& x) {
        Vector r(n);
        for (int i = 0; i < n; ++i) {
            const double prev = i > 0 ? x[i - 1] : 0.0;
            const double next = i + 1 < n ? x[i + 1] : 0.0;
            r[i] = (3.0 - 2.0 * x[i]) * x[i] - prev - 2.0 * next + 1.0;
        }
        return r;
    };
    p.f = [residuals](const Vector& x) { return residuals(x).squaredNorm(); };
    p.grad = [n, residuals](const Vector& x) -> Vector {
        const Vector r = residuals(x);
        Vector g(n);
        for (int j = 0; j < n; ++j) {
            double v = r[j] * (3.0 - 4.0 * x[j]);
            if (j + 1 < n) v -= r[j + 1];
            if (j > 0) v -= 2.0 * r[j - 1];
            g[j] = 2.0 * v;
        }
        return g;
    };
    p.x0 = Vector::Constant(n, -1.0);
    p.f_star = 0.0;
    return p;
}

// The minimum value is positive but has no closed form, so f_star is left unset.
ObjectiveProblem make_penalty1(int n) {
    constexpr double a = 1e-5;
    ObjectiveProblem p;
    p.name = sized("penalty1", n);
    p.dim = n;
    p.f = [](const Vector& x) {
        const double t = x.squaredNorm() - 0.25;
        return a * (x.array() - 1.0).square().sum() + t * t;
    };
    p.grad = [](const Vector& x) -> Vector {
        const double t = x.squaredNorm() - 0.25;
        return 2.0 * a * (x.array() - 1.0).matrix() + 4.0 * t * x;
    };
    p.x0 = Vector::LinSpaced(n, 1.0, n);
    return p;
}

ObjectiveProblem make_quartic(int n) {
    ObjectiveProblem p;
    p.name = sized("quartic", n);
    p.dim = n;
    const Vector w = Vector::LinSpaced(n, 1.0, n);
    p.f = [w](const Vector& x) { return (w.array() * x.array().square().square()).sum(); };
    p.grad = [w](const Vector& x) -> Vector { return (4.0 * w.array() * x.array().cube()).matrix(); };
    p.x0 = Vector::Ones(n);
    p.f_star = 0.0;
    return p;
}

ObjectiveProblem make_raydan1(int n) {
    ObjectiveProblem p;
    p.name = sized("raydan1", n);
    p.dim = n;
    const Vector w = Vector::LinSpaced(n, 1.0, n) / 10.0;
    p.f = [w](const Vector& x) { return (w.array() * (x.array().exp() - x.array())).sum(); };
    p.grad = [w](const Vector& x) -> Vector { return (w.array() * (x.array().exp() - 1.0)).matrix(); };
    p.x0 = Vector::Ones(n);
    p.f_star = w.sum();
    return p;
}

ObjectiveProblem make_freudenstein_roth(int n) {
    require_multiple(n, 2, "freudenstein_roth");
    ObjectiveProblem p;
    p.name = sized("freudenstein_roth", n);
    p.dim = n;
    p.f = [n](const Vector& x) {
        double sum = 0.0;
        for (int i = 0; i < n; i += 2) {
            const double u = x[i], v = x[i + 1];
            const double r1 = -13.0 + u + ((5.0 - v) * v - 2.0) * v;
            const double r2 = -29.0 + u + ((v + 1.0) * v - 14.0) * v;
            sum += r1 * r1 + r2 * r2;
        }
        return sum;
    };
    p.grad = [n](const Vector& x) -> Vector {
        Vector g(n);
        for (int i = 0; i < n; i += 2) {
            const double u = x[i], v = x[i + 1];
            const double r1 = -13.0 + u + ((5.0 - v) * v - 2.0) * v;
            const double r2 = -29.0 + u + ((v + 1.0) * v - 14.0) * v;
            g[i] = 2.0 * (r1 + r2);
            g[i + 1] = 2.0 * (r1 * (10.0 * v - 3.0 * v * v - 2.0) + r2 * (3.0 * v * v + 2.0 * v - 14.0));
        }
        return g;
    };
    p.x0.resize(n);
    for (int i = 0; i < n; i += 2) {
        p.x0[i] = 0.5;
        p.x0[i + 1] = -2.0;
    }
    p.f_star = 0.0;
    return p;
}

const std::vector<ObjectiveProblem>& registry() {
    static const std::vector<ObjectiveProblem> problems = [] {
        std::vector<ObjectiveProblem> out;
        for (int n : {2, 10, 100, 1000}) out.push_back(make_sphere(n));
        for (int n : {10, 100, 1000, 10000}) out.push_back(make_illcond_quadratic(n));
        for (int n : {10, 100, 1000}) out.push_back(make_logeig_quadratic(n));
        for (int n : {2, 10, 100, 1000}) out.push_back(make_extended_rosenbrock(n));
        for (int n : {10, 100}) out.push_back(make_chained_rosenbrock(n));
        for (int n : {2, 10}) out.push_back(make_extended_beale(n));
        for (int n : {100, 1000}) out.push_back(make_extended_wood(n));
        for (int n : {100, 1000}) out.push_back(make_extended_powell(n));
        for (int n : {10, 100}) out.push_back(make_dixon_price(n));
        for (int n : {10, 100}) out.push_back(make_trigonometric(n));
        for (int n : {10, 100, 1000}) out.push_back(make_broyden_tridiagonal(n));
        for (int n : {10, 100}) out.push_back(make_penalty1(n));
        for (int n : {10, 100}) out.push_back(make_quartic(n));
        for (int n : {10, 100}) out.push_back(make_raydan1(n));
        for (int n : {2, 10}) out.push_back(make_freudenstein_roth(n));
        return out;
    }();
    return problems;
}

const ObjectiveProblem& find_problem(std::string_view name) {
    for (const auto& p : registry()) {
        if (p.name == name) return p;
    }
    throw std::out_of_range("unknown problem: " + std::string(name));
}

std::vector<std::string> desk_suite() {
    return {"sphere_n10",          "illcond_quadratic_n10", "illcond_quadratic_n100", "logeig_quadratic_n10",
            "rosenbrock_n2",       "rosenbrock_n10",        "chained_rosenbrock_n10", "beale_n2",
            "wood_n100",           "powell_singular_n100",  "dixon_price_n10",        "trigonometric_n10",
            "broyden_tridiagonal_n10", "penalty1_n10",      "quartic_n10"};
}

Vector finite_diff_gradient(const ObjectiveProblem& p, const Vector& x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite_diff_gradient: step must be positive");
    Vector g(x.size());
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double fp = p.f(probe);
        probe[i] = x[i] - h;
        const double fm = p.f(probe);
        probe[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw NonFiniteError(p.name + ": non-finite objective probing coordinate " + std::to_string(i));
        }
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

}  // namespace rqn
