// Randomized invariants over many generated instances.
#include "support.hpp"

#include "esgmv/asymptotics.hpp"
#include "esgmv/sharpe_oracle.hpp"
#include "esgmv/solvers.hpp"
#include "esgmv/sr_estimator.hpp"

#include <doctest.h>

using namespace esgmv;
using namespace esgmv::test;

namespace {

constexpr int kCases = 1000;

struct Instance {
    EstimationInputs in;
    Matrix q;
    double eta;
    double gamma;
};

Instance random_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dim(2, 10);
    std::uniform_real_distribution<double> log_eta(-3.0, 1.0), g(1.0, 10.0);
    const Index p = dim(rng);
    const Index T = p + 5 + dim(rng) * 4;
    Instance x;
    const Matrix r = 0.05 * random_matrix(T, p, rng);
    x.in.mu_hat = r.colwise().mean().transpose();
    x.in.sigma_hat = (r.rowwise() - x.in.mu_hat.transpose()).transpose() * (r.rowwise() - x.in.mu_hat.transpose()) /
                     static_cast<double>(T);
    x.in.s_tilde_hat = random_vector(p, rng);
    x.in.periods = T;
    x.q = random_spd(p, rng);
    x.eta = std::pow(10.0, log_eta(rng));
    x.gamma = g(rng);
    return x;
}

}  // namespace

TEST_CASE("constrained weights are exactly ESG-neutral") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < kCases; ++i) {
        const Instance x = random_instance(rng);
        const Vector& st = *x.in.s_tilde_hat;
        const Vector w = solve_regularized(x.in.mu_hat, x.in.sigma_hat, x.eta, x.q, st, x.gamma).weights.w;
        CHECK(std::abs(w.dot(st)) <= 1e-10 * std::max(1.0, w.norm() * st.norm()));
        const Vector v = solve_constrained(x.in.mu_hat, x.in.sigma_hat + x.eta * x.q, st, x.gamma).weights.w;
        CHECK(std::abs(v.dot(st)) <= 1e-10 * std::max(1.0, v.norm() * st.norm()));
    }
}

TEST_CASE("Sharpe ratio is scale invariant") {
    // Weights carry 40 significant bits and scales are k/64 with k < 2^13, so
    // the scaled vector is exact and only the evaluation itself is on trial.
    std::mt19937_64 rng(102);
    std::uniform_int_distribution<int> k(1, 8191);
    auto trim = [](double x) {
        int e = 0;
        const double m = std::frexp(x, &e);
        return std::ldexp(std::round(std::ldexp(m, 40)), e - 40);
    };
    for (int i = 0; i < kCases; ++i) {
        const Index p = 2 + static_cast<Index>(i % 9);
        const MomentModel m{random_vector(p, rng), random_spd(p, rng)};
        const Vector w = random_vector(p, rng).unaryExpr(trim);
        const double a = oos_sharpe(w, m);
        const double b = oos_sharpe(Vector(w * (k(rng) / 64.0)), m);
        CHECK(std::abs(a - b) <= 1e-14 * std::abs(a));
    }
}

TEST_CASE("estimated Sharpe ignores the scale of the ESG tilt") {
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    std::bernoulli_distribution flip(0.5);
    int compared = 0;
    for (int i = 0; i < kCases; ++i) {
        const Instance x = random_instance(rng);
        GridPoint base = SpectralSweep(x.in, x.q).evaluate(x.eta);
        if (!base.valid) continue;
        EstimationInputs scaled = x.in;
        scaled.s_tilde_hat = (flip(rng) ? -1.0 : 1.0) * scale(rng) * *x.in.s_tilde_hat;
        const GridPoint other = SpectralSweep(scaled, x.q).evaluate(x.eta);
        REQUIRE(other.valid);
        CHECK(std::abs(other.theta_hat - base.theta_hat) <= 1e-9 * std::max(1.0, std::abs(base.theta_hat)));
        ++compared;
    }
    CHECK(compared > kCases / 2);
}

TEST_CASE("only the product eta Q matters") {
    std::mt19937_64 rng(104);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    int compared = 0;
    for (int i = 0; i < kCases; ++i) {
        const Instance x = random_instance(rng);
        const GridPoint base = SpectralSweep(x.in, x.q).evaluate(x.eta);
        if (!base.valid) continue;
        const double b = scale(rng);
        const GridPoint other = SpectralSweep(x.in, b * x.q).evaluate(x.eta / b);
        REQUIRE(other.valid);
        CHECK(std::abs(other.theta_hat - base.theta_hat) <= 1e-9 * std::max(1.0, std::abs(base.theta_hat)));
        ++compared;
    }
    CHECK(compared > kCases / 2);
}

TEST_CASE("s0 fixed-point residual on random SPD instances") {
    std::mt19937_64 rng(105);
    std::uniform_real_distribution<double> c_dist(0.1, 3.0), log_eta(-2.0, 2.0);
    for (int i = 0; i < kCases; ++i) {
        const Index p = 2 + static_cast<Index>(i % 7);
        const Matrix sigma = random_spd(p, rng);
        const Matrix q = random_spd(p, rng);
        const double c = c_dist(rng), eta = std::pow(10.0, log_eta(rng));
        const AsymptoticState st = deterministic_equivalents(sigma, q, eta, c);
        const Matrix g = (sigma / (1.0 + st.s0) + eta * q).inverse();
        const double rhs = c / static_cast<double>(p) * (sigma * g).trace();
        CHECK(std::abs(st.s0 - rhs) <= 1e-10 * std::max(1.0, st.s0));
        CHECK(st.correction > 0.0);
    }
}
