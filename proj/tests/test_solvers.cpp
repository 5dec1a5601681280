#include "support.hpp"

#include "esgmv/solvers.hpp"

#include <doctest.h>

using namespace esgmv;
using namespace esgmv::test;

namespace {

Matrix row(const Vector& v) { return v.transpose(); }

}  // namespace

TEST_CASE("unconstrained MV") {
    SUBCASE("identity covariance") {
        const PortfolioWeights w = solve_mv(Eigen::Vector2d(1, 2), Matrix::Identity(2, 2), 2.0);
        CHECK(w.w(0) == doctest::Approx(0.5));
        CHECK(w.w(1) == doctest::Approx(1.0));
        CHECK(w.gamma == 2.0);
    }
    SUBCASE("zero mean gives zero weights") {
        std::mt19937_64 rng(1);
        CHECK(solve_mv(Vector::Zero(4), random_spd(4, rng), 3.0).w.norm() == 0.0);
    }
    SUBCASE("matches the brute-force QP") {
        std::mt19937_64 rng(2);
        const Vector mu = random_vector(4, rng);
        const Matrix sigma = random_spd(4, rng);
        const Vector ref = kkt_solve(mu, sigma, 5.0, Matrix(0, 4));
        CHECK((solve_mv(mu, sigma, 5.0).w - ref).cwiseAbs().maxCoeff() <= 1e-8);
    }
    SUBCASE("singular covariance") {
        Matrix s = Matrix::Zero(2, 2);
        s(0, 0) = 1.0;
        CHECK_THROWS_AS(solve_mv(Eigen::Vector2d(1, 1), s, 1.0), Error);
    }
}

TEST_CASE("ESG-constrained MV") {
    SUBCASE("orthogonal constraint does not bind") {
        const Solution s = solve_constrained(Eigen::Vector2d(1, 0), Matrix::Identity(2, 2), Eigen::Vector2d(0, 1), 1.0);
        CHECK(std::abs(s.lagrange.multiplier) < 1e-15);
        CHECK(s.weights.w(0) == doctest::Approx(1.0));
        CHECK(std::abs(s.weights.w(1)) < 1e-15);
        CHECK(s.lagrange.binding);
    }
    SUBCASE("constraint parallel to the mean kills the portfolio") {
        const Solution s = solve_constrained(Eigen::Vector2d(1, 0), Matrix::Identity(2, 2), Eigen::Vector2d(2, 0), 1.0);
        CHECK(s.lagrange.multiplier == doctest::Approx(-0.5));
        CHECK(s.weights.w.norm() < 1e-15);
    }
    SUBCASE("zero exposure is degenerate") {
        try {
            solve_constrained(Eigen::Vector2d(1, 0), Matrix::Identity(2, 2), Vector::Zero(2), 1.0);
            FAIL("expected degenerate constraint");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DegenerateConstraint);
        }
    }
    SUBCASE("matches bordered KKT on a random 5-asset instance") {
        std::mt19937_64 rng(3);
        const Vector mu = random_vector(5, rng);
        const Matrix sigma = random_spd(5, rng);
        const Vector st = random_vector(5, rng);
        const Solution s = solve_constrained(mu, sigma, st, 3.0);
        CHECK((s.weights.w - kkt_solve(mu, sigma, 3.0, row(st))).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK(std::abs(s.weights.w.dot(st)) <= 1e-10 * s.weights.w.norm() * st.norm());
    }
}

TEST_CASE("regularized MV") {
    std::mt19937_64 rng(4);
    SUBCASE("vanishing eta recovers the constrained solution") {
        const Vector mu = random_vector(4, rng);
        const Matrix sigma = random_spd(4, rng);
        const Vector st = random_vector(4, rng);
        const Vector ref = solve_constrained(mu, sigma, st, 2.0).weights.w;
        const Vector w = solve_regularized(mu, sigma, 1e-12, Matrix::Identity(4, 4), st, 2.0).weights.w;
        CHECK((w - ref).cwiseAbs().maxCoeff() <= 1e-9);
    }
    SUBCASE("zero sample covariance") {
        const Solution s =
            solve_regularized(Eigen::Vector2d(1, 0), Matrix::Zero(2, 2), 1.0, Matrix::Identity(2, 2), Vector(Eigen::Vector2d(0, 1)), 1.0);
        CHECK(std::abs(s.lagrange.multiplier) < 1e-15);
        CHECK(s.weights.w(0) == doctest::Approx(1.0));
        CHECK(std::abs(s.weights.w(1)) < 1e-15);
    }
    SUBCASE("singular sample covariance, p = 5, T = 3") {
        const Matrix x = random_matrix(3, 5, rng);
        const Matrix sigma_hat = x.transpose() * x / 3.0;
        const Vector mu = random_vector(5, rng);
        const Vector st = random_vector(5, rng);
        const Matrix q = random_spd(5, rng);
        const double eta = 0.7;
        const Vector w = solve_regularized(mu, sigma_hat, eta, q, st, 4.0).weights.w;
        const Vector ref = kkt_solve(mu, sigma_hat + eta * q, 4.0, row(st));
        CHECK((w - ref).cwiseAbs().maxCoeff() <= 1e-8);
    }
    SUBCASE("unconstrained variant is flagged non-binding") {
        const Solution s = solve_regularized(Eigen::Vector2d(1, 2), Matrix::Identity(2, 2), 1.0, Matrix::Identity(2, 2),
                                             std::nullopt, 1.0);
        CHECK_FALSE(s.lagrange.binding);
        CHECK(s.weights.w(1) == doctest::Approx(1.0));
    }
    SUBCASE("prepared system reuse gives identical weights") {
        const Vector mu = random_vector(6, rng);
        const Matrix sigma = random_spd(6, rng);
        const Vector st = random_vector(6, rng);
        const Matrix q = Matrix::Identity(6, 6);
        const RegularizedSystem sys(sigma, q, 0.3);
        CHECK(solve_regularized(sys, mu, st, 2.0).weights.w == solve_regularized(mu, sigma, 0.3, q, st, 2.0).weights.w);
    }
}

TEST_CASE("A-norm budget") {
    CHECK(anorm_budget(PortfolioWeights{Vector::Zero(3), 1.0}, Matrix::Identity(3, 3)) == 0.0);
    CHECK(anorm_budget(PortfolioWeights{Eigen::Vector2d(3, 4), 1.0}, Matrix::Identity(2, 2)) == 25.0);
}

TEST_CASE("A-norm budget equals the closed-form delta") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Index p = 6;
        const Vector mu = random_vector(p, rng);
        const Matrix sigma = random_spd(p, rng);
        const Vector st = random_vector(p, rng);
        const Matrix q = random_spd(p, rng);
        const double eta = 0.5, gamma = 3.0;
        const Solution s = solve_regularized(mu, sigma, eta, q, st, gamma);
        const Matrix a_inv = (sigma + eta * q).inverse();
        const double zeta = -st.dot(a_inv * mu) / st.dot(a_inv * st);
        const Vector v = mu + zeta * st;
        const double delta = v.dot(a_inv * q * a_inv * v) / (gamma * gamma);
        CHECK(std::abs(anorm_budget(s.weights, q) - delta) <= 1e-10 * delta);
    }
}

TEST_CASE("budget normalization") {
    CHECK(normalize_to_budget(PortfolioWeights{Eigen::Vector2d(1, 1), 1.0}).w == Eigen::Vector2d(0.5, 0.5));
    CHECK(normalize_to_budget(PortfolioWeights{Eigen::Vector2d(2, -1), 1.0}).w == Eigen::Vector2d(2, -1));
    try {
        normalize_to_budget(PortfolioWeights{Eigen::Vector2d(1, -1), 1.0});
        FAIL("expected normalization error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Normalization);
    }
}

TEST_CASE("MV on ESG-valued returns reproduces the regularized solution") {
    // Returns blended with ESG scores: r_iota = (1 - iota) r + iota a. Plain MV
    // on the blended moments with risk aversion gamma / (1 - iota) equals the
    // regularized ESG-constrained portfolio with Q = Omega and
    // eta = (iota / (1 - iota))^2 once the ESG mean is aligned with s_tilde.
    std::mt19937_64 rng(6);
    for (double iota : {0.1, 0.3, 0.6}) {
        const Index p = 5;
        const Vector mu = random_vector(p, rng);
        const Matrix sigma = random_spd(p, rng);
        const Matrix omega = random_spd(p, rng);
        const Vector st = random_vector(p, rng);
        const double gamma = 4.0;
        const double eta = std::pow(iota / (1.0 - iota), 2);
        const Solution reg = solve_regularized(mu, sigma, eta, omega, st, gamma);
        const Vector esg_mean = (1.0 - iota) / iota * reg.lagrange.multiplier * st;

        const Vector blended_mean = (1.0 - iota) * mu + iota * esg_mean;
        const Matrix blended_cov = std::pow(1.0 - iota, 2) * sigma + iota * iota * omega;
        const Vector w = solve_mv(blended_mean, blended_cov, gamma / (1.0 - iota)).w;
        CHECK((w - reg.weights.w).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, reg.weights.w.cwiseAbs().maxCoeff()));
        CHECK(std::abs(w.dot(st)) <= 1e-10 * w.norm() * st.norm());
    }
}
