#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rqn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Smooth unconstrained test problem with an analytic gradient.
///
/// Instances are immutable after construction and may be evaluated from
/// several threads at once.
struct ObjectiveProblem {
    std::string name;
    int dim = 0;
    std::function<double(const Vector&)> f;
    std::function<Vector(const Vector&)> grad;
    Vector x0;
    /// Known infimum, when one is available.
    std::optional<double> f_star;
};

/// Raised when an objective evaluation produces NaN or infinity.
class NonFiniteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every built-in problem. Dimensions are encoded in the names
/// (`rosenbrock_n100`), and names are unique.
const std::vector<ObjectiveProblem>& registry();

/// Look up a registered problem; throws std::out_of_range for unknown names.
const ObjectiveProblem& find_problem(std::string_view name);

/// Fifteen small problems used for the noisy robustness benchmark.
std::vector<std::string> desk_suite();

// Factories, also used directly by tests that need off-registry sizes.
ObjectiveProblem make_sphere(int n);
ObjectiveProblem make_illcond_quadratic(int n);
ObjectiveProblem make_logeig_quadratic(int n);
ObjectiveProblem make_extended_rosenbrock(int n);
ObjectiveProblem make_chained_rosenbrock(int n);
ObjectiveProblem make_extended_beale(int n);
ObjectiveProblem make_extended_wood(int n);
ObjectiveProblem make_extended_powell(int n);
ObjectiveProblem make_dixon_price(int n);
ObjectiveProblem make_trigonometric(int n);
ObjectiveProblem make_broyden_tridiagonal(int n);
ObjectiveProblem make_penalty1(int n);
ObjectiveProblem make_quartic(int n);
ObjectiveProblem make_raydan1(int n);
ObjectiveProblem make_freudenstein_roth(int n);

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h for every i.
/// Throws NonFiniteError naming the coordinate when a probe is not finite.
Vector finite_diff_gradient(const ObjectiveProblem& p, const Vector& x, double h);

}  // namespace rqn
