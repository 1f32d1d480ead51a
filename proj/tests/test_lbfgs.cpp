#include "rqn/lbfgs.hpp"

#include "pair_gen.hpp"

#include <doctest.h>

#include <cmath>

using namespace rqn;
using rqn::testing::random_memory;
using rqn::testing::random_vector;

TEST_CASE("powell damping") {
    SUBCASE("already curved enough") {
        const Vector s{{1.0, 2.0}};
        CHECK(*powell_damp(s, s, 1.0) == s);
    }
    SUBCASE("negative curvature") {
        const auto y = powell_damp(Vector{{1.0, 0.0}}, Vector{{-1.0, 0.0}}, 1.0);
        REQUIRE(y);
        CHECK((*y)[0] == doctest::Approx(0.2).epsilon(1e-15));
        CHECK((*y)[1] == 0.0);
    }
    SUBCASE("zero curvature") {
        const Vector s{{2.0, 0.0}};
        const auto y = powell_damp(s, Vector::Zero(2), 1.0);
        REQUIRE(y);
        CHECK((*y)[0] == doctest::Approx(0.4).epsilon(1e-15));
        CHECK(y->dot(s) == doctest::Approx(0.8).epsilon(1e-15));
    }
    CHECK_FALSE(powell_damp(Vector::Zero(3), Vector::Ones(3), 1.0));
}

TEST_CASE("damped pairs always keep a fifth of the surrogate curvature") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> gam(-3.0, 3.0);
    for (int t = 0; t < 500; ++t) {
        const int n = 1 + t % 12;
        const Vector s = random_vector(n, rng);
        const Vector y = random_vector(n, rng) * std::pow(10.0, gam(rng));
        const double gamma = std::pow(10.0, gam(rng));
        const auto yb = powell_damp(s, y, gamma);
        REQUIRE(yb);
        const double floor = kPowellSigma * gamma * s.squaredNorm();
        CHECK(yb->dot(s) >= floor * (1.0 - 1e-12));
    }
}

TEST_CASE("pair screening") {
    const Vector e1{{1.0, 0.0}};
    CHECK(screen_pair(e1, e1));
    CHECK_FALSE(screen_pair(e1, Vector::Zero(2)));
    CHECK(screen_pair(e1, Vector{{1e6, 0.0}}));
    CHECK_FALSE(screen_pair(Vector::Zero(2), e1));
    CHECK_FALSE(screen_pair(e1, Vector{{std::nan(""), 0.0}}));
    // too much curvature for a tight upper constant
    CHECK_FALSE(screen_pair(e1, Vector{{3.0, 0.0}}, {0.5, 2.0}));
    CHECK_FALSE(screen_pair(e1, Vector{{0.4, 0.0}}, {0.5, 2.0}));
}

TEST_CASE("memory ring and scaling") {
    LbfgsMemory mem(10);
    CHECK(mem.gamma() == 1.0);
    mem.push(CurvaturePair::make(Vector{{1.0, 0.0}}, Vector{{2.0, 0.0}}));
    CHECK(mem.pairs().front().sy == 2.0);
    CHECK(mem.pairs().front().yy == 4.0);
    CHECK(mem.gamma() == 2.0);

    for (int i = 1; i <= 10; ++i) mem.push(CurvaturePair::make(Vector{{double(i), 0.0}}, Vector{{double(i), 0.0}}));
    CHECK(mem.size() == 10);
    CHECK(mem.pairs().front().s[0] == 1.0);
    CHECK(mem.pairs().back().s[0] == 10.0);
    CHECK(mem.gamma() == 1.0);
    CHECK_THROWS_AS(LbfgsMemory(0), std::invalid_argument);

    LbfgsMemory one(3);
    const Vector s{{0.3, -1.2}};
    one.push(CurvaturePair::make(s, s));
    CHECK(one.gamma() == doctest::Approx(1.0).epsilon(1e-15));
    // shifting s = y by mu gives (1 + mu) s, so the scaling is 1 + mu
    CHECK(one.gamma(2.5) == doctest::Approx(3.5).epsilon(1e-14));
}

TEST_CASE("two-loop recursion examples") {
    LbfgsMemory empty;
    CHECK(empty.two_loop_direction(Vector{{3.0, 4.0}}, 0.0) == Vector{{-3.0, -4.0}});
    CHECK(empty.two_loop_direction(Vector{{2.0, 0.0}}, 1.0) == Vector{{-1.0, 0.0}});

    LbfgsMemory mem;
    const Vector e1{{1.0, 0.0}};
    mem.push(CurvaturePair::make(e1, e1));
    const Vector d = mem.two_loop_direction(Vector{{0.0, 1.0}}, 0.0);
    CHECK(std::fabs(d[0]) <= 1e-15);
    CHECK(d[1] == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("dense materialization") {
    LbfgsMemory empty;
    CHECK(empty.materialize_dense(0.0, 3).isApprox(Matrix::Identity(3, 3)));
    CHECK(empty.materialize_dense(0.5, 2).isApprox(1.5 * Matrix::Identity(2, 2)));

    std::mt19937_64 rng(17);
    for (double mu : {0.0, 0.3, 4.0}) {
        LbfgsMemory mem;
        const Vector s = random_vector(6, rng);
        const Vector y = rqn::testing::random_spd(6, 0.5, 3.0, rng) * s;
        mem.push(CurvaturePair::make(s, y));
        const Matrix b = mem.materialize_dense(mu, 6);
        const Vector target = y + mu * s;
        CHECK((b * s - target).norm() <= 1e-10 * target.norm());
        CHECK((b - b.transpose()).norm() <= 1e-12 * b.norm());
    }
    CHECK_THROWS(empty.materialize_dense(0.0, 51));
}

TEST_CASE("two-loop direction equals the dense inverse") {
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<int> dim(1, 20);
    int cases = 0;
    for (double mu : {0.0, 0.1, 1.0, 10.0}) {
        for (int t = 0; t < 25; ++t) {
            const int n = dim(rng);
            const LbfgsMemory mem = random_memory(n, 10, 0.1, 10.0, rng);
            const Eigen::PartialPivLU<Matrix> lu(mem.materialize_dense(mu, n));
            for (int k = 0; k < 4; ++k) {
                const Vector g = random_vector(n, rng);
                const Vector d = mem.two_loop_direction(g, mu);
                const Vector ref = -lu.solve(g);
                CHECK((d - ref).norm() <= 1e-9 * ref.norm());
                CHECK(g.dot(d) < 0.0);
                ++cases;
            }
        }
    }
    CHECK(cases == 400);
}

TEST_CASE("shifting the pairs by hand matches the shifted materialization") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 20; ++t) {
        const int n = 8;
        const double mu = 0.05 * (t + 1);
        const LbfgsMemory mem = random_memory(n, 6, 0.2, 5.0, rng);
        LbfgsMemory shifted(mem.capacity());
        for (const auto& p : mem.pairs()) shifted.push(CurvaturePair::make(p.s, p.y_bar + mu * p.s));
        const Matrix a = mem.materialize_dense(mu, n);
        const Matrix b = shifted.materialize_dense(0.0, n);
        CHECK((a - b).norm() <= 1e-10 * a.norm());
        const Vector g = random_vector(n, rng);
        const Vector d = shifted.two_loop_direction(g, 0.0);
        CHECK((mem.two_loop_direction(g, mu) - d).norm() <= 1e-10 * d.norm());
    }
}

TEST_CASE("eigenvalues stay inside the screened bounds") {
    const double lam = 0.5, Lam = 2.0;
    const double kappa = Lam / lam;
    std::mt19937_64 rng(31415);
    for (int t = 0; t < 50; ++t) {
        const LbfgsMemory mem = random_memory(10, 10, lam, Lam, rng);
        for (const auto& p : mem.pairs()) REQUIRE(screen_pair(p.s, p.y_bar, {lam, Lam}));
        const double p = static_cast<double>(mem.size());
        const double upper = (1.0 + p) * Lam;
        const double lower =
            1.0 / (std::pow(1.0 + std::sqrt(kappa), 2.0 * p) * (1.0 / lam + 1.0 / (lam * (2.0 * std::sqrt(kappa) + kappa))));
        const Eigen::SelfAdjointEigenSolver<Matrix> es(mem.materialize_dense(0.0, 10));
        CHECK(es.eigenvalues().minCoeff() >= lower * (1.0 - 1e-8));
        CHECK(es.eigenvalues().maxCoeff() <= upper * (1.0 + 1e-8));
    }
}

TEST_CASE("modified secant") {
    SUBCASE("exact on quadratics") {
        std::mt19937_64 rng(8);
        const Matrix a = rqn::testing::random_spd(5, 0.5, 4.0, rng);
        const Vector x0 = random_vector(5, rng), x1 = random_vector(5, rng);
        auto f = [&](const Vector& x) { return 0.5 * x.dot(a * x); };
        const Vector s = x1 - x0, y = a * s;
        const Vector ym = modified_secant(y, s, f(x0), f(x1), a * x0, a * x1);
        CHECK((ym - y).norm() <= 1e-12 * y.norm());
    }
    const Vector e1{{1.0, 0.0}};
    const Vector zero = Vector::Zero(2);
    SUBCASE("small correction is applied") {
        // theta = 2 (f_k - f_k1) = 0.05 = 0.05 y's
        const Vector ym = modified_secant(e1, e1, 1.025, 1.0, zero, zero);
        CHECK(ym[0] == doctest::Approx(1.05).epsilon(1e-14));
        CHECK(ym[1] == 0.0);
    }
    SUBCASE("large correction is skipped") {
        CHECK(modified_secant(e1, e1, 1.25, 1.0, zero, zero) == e1);
        CHECK(modified_secant(e1, e1, 1.0, 1.25, zero, zero) == e1);
    }
    SUBCASE("lost curvature is skipped") {
        // y's < 0 and the small correction cannot fix that
        const Vector y{{-1.0, 0.0}};
        CHECK(modified_secant(y, e1, 1.0, 1.0 + 0.01, zero, zero) == y);
    }
}
