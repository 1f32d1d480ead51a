#include "rqn/regularizer.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rqn;

TEST_CASE("zero-shift eligibility") {
    RegularizerState st;
    CHECK(st.mu_zero_eligible(1e300));
    st.register_k0(5.0, 0.0);
    CHECK(st.best_k0_level() == 5.0);
    CHECK(st.mu_zero_eligible(5.0));
    CHECK_FALSE(st.mu_zero_eligible(5.0001));
}

TEST_CASE("K0 registration and restarts") {
    SUBCASE("first entry") {
        RegularizerState st;
        st.register_k0(3.0, 0.5);
        CHECK(st.best_k0_level() == 2.5);
        CHECK(st.restarts() == 0);
    }
    SUBCASE("large drop restarts the accumulator") {
        RegularizerState st;
        st.register_k0(10.0, 0.0);
        st.mu_positive(Vector{{3.0, 4.0}});
        CHECK(st.g_energy() == 25.0);
        st.register_k0(8.5, 0.2);
        CHECK(st.best_k0_level() == doctest::Approx(8.3).epsilon(1e-15));
        CHECK(st.restarts() == 1);
        CHECK(st.g_energy() == 0.0);
    }
    SUBCASE("small drop keeps it") {
        RegularizerState st;
        st.register_k0(3.0, 0.5);
        st.mu_positive(Vector{{1.0}});
        st.register_k0(2.4, 0.3);
        CHECK(st.best_k0_level() == doctest::Approx(2.1).epsilon(1e-15));
        CHECK(st.restarts() == 0);
        CHECK(st.g_energy() == 1.0);
    }
    SUBCASE("a drop of exactly the threshold does not restart") {
        RegularizerState st;
        st.register_k0(4.0, 0.0);
        st.register_k0(3.0, 0.0);
        CHECK(st.restarts() == 0);
    }
}

TEST_CASE("positive shift") {
    SUBCASE("first entry") {
        RegularizerState st;
        const double mu = st.mu_positive(Vector{{6.0, 8.0}});
        CHECK(mu == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(st.accumulator() == doctest::Approx(10.0).epsilon(1e-12));
    }
    SUBCASE("lower clip") {
        RegularizerState st;
        st.mu_positive(Vector{{5.0}});
        const double mu = st.mu_positive(Vector{{1e-8}});
        CHECK(mu == doctest::Approx(0.05).epsilon(1e-12));
    }
    SUBCASE("non-finite gradient") {
        RegularizerState st;
        CHECK_THROWS_AS(st.mu_positive(Vector{{std::nan("")}}), std::domain_error);
    }
}

TEST_CASE("shift bounds and AdaGrad-Norm inequalities on random sequences") {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> expo(-6.0, 4.0);
    std::normal_distribution<double> normal;
    const RegularizerConfig cfg;
    for (int run = 0; run < 200; ++run) {
        RegularizerState st(cfg);
        const int len = 1 + run % 40;
        double sum_g2 = 0.0, lhs_sq = 0.0, lhs_lin = 0.0;
        for (int k = 0; k < len; ++k) {
            Vector g(3);
            for (int i = 0; i < 3; ++i) g[i] = normal(rng);
            g *= std::pow(10.0, expo(rng));
            const double mu = st.mu_positive(g);
            const double G = st.accumulator();
            CHECK(mu >= cfg.theta_min * G * (1.0 - 1e-15));
            CHECK(mu <= cfg.theta_max * G * (1.0 + 1e-15));
            // the accumulator already holds ||g||^2, so the upper clip never binds
            CHECK(mu == std::max(g.norm() / 10.0, cfg.theta_min * G));
            sum_g2 += g.squaredNorm();
            lhs_sq += g.squaredNorm() / (mu * mu);
            lhs_lin += g.squaredNorm() / mu;
        }
        const double upper = (std::log(cfg.varsigma + sum_g2) - std::log(cfg.varsigma)) / (cfg.theta_min * cfg.theta_min);
        const double lower = (std::sqrt(cfg.varsigma + sum_g2) - std::sqrt(cfg.varsigma)) / cfg.theta_max;
        CHECK(lhs_sq <= upper * (1.0 + 1e-9));
        CHECK(lhs_lin >= lower * (1.0 - 1e-9));
    }
}

TEST_CASE("the K0 level only goes down") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    RegularizerState st;
    double prev = st.best_k0_level();
    for (int i = 0; i < 500; ++i) {
        const double f = u(rng);
        if (!st.mu_zero_eligible(f)) continue;
        st.register_k0(f, std::fabs(u(rng)) * 0.01);
        CHECK(st.best_k0_level() <= prev);
        CHECK(st.best_k0_level() < f);
        prev = st.best_k0_level();
    }
}

TEST_CASE("configuration checks") {
    RegularizerConfig cfg;
    cfg.varsigma = 0.0;
    CHECK_THROWS_AS(RegularizerState{cfg}, std::invalid_argument);
    cfg = {};
    cfg.theta_min = 2.0;
    CHECK_THROWS_AS(RegularizerState{cfg}, std::invalid_argument);
}
