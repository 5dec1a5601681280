#include "support.hpp"

#include "esgmv/estimators.hpp"
#include "esgmv/sr_estimator.hpp"

#include <doctest.h>

using namespace esgmv;
using namespace esgmv::test;

namespace {

EstimationInputs random_inputs(Index p, Index T, std::mt19937_64& rng, bool constrained = true) {
    const Matrix x = 0.05 * random_matrix(T, p, rng);
    EstimationInputs in;
    in.mu_hat = 0.01 * random_vector(p, rng);
    in.sigma_hat = sample_covariance(x);
    if (constrained) in.s_tilde_hat = random_vector(p, rng);
    in.periods = T;
    return in;
}

}  // namespace

TEST_CASE("d1 estimate") {
    EstimationInputs in;
    in.mu_hat = Eigen::Vector2d(1, 0);
    in.sigma_hat = Matrix::Zero(2, 2);
    in.s_tilde_hat = Vector(Eigen::Vector2d(0, 1));
    in.periods = 10;
    CHECK(estimate_d1(in, 1.0, Matrix::Identity(2, 2)) == doctest::Approx(1.0));
    CHECK(estimate_d2(in, 1.0, Matrix::Identity(2, 2)) == 0.0);
    try {
        estimate_sharpe(in, 1.0, Matrix::Identity(2, 2));
        FAIL("expected invalid estimate");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidEstimate);
    }

    SUBCASE("zero mean leaves only the bias term") {
        std::mt19937_64 rng(1);
        EstimationInputs z = random_inputs(4, 20, rng);
        z.mu_hat.setZero();
        const double eta = 0.01;
        const Matrix q = Matrix::Identity(4, 4);
        const Matrix a_inv = (z.sigma_hat + eta * q).inverse();
        const double tr = (a_inv * z.sigma_hat).trace();
        CHECK(estimate_d1(z, eta, q) == doctest::Approx(-tr / (20 - tr)).epsilon(1e-12));
    }
}

TEST_CASE("d2 estimate in the scalar case") {
    const double s2 = 0.04, q0 = 2.0, m = 0.01, eta = 0.3;
    const Index T = 50;
    EstimationInputs in;
    in.mu_hat = Vector::Constant(1, m);
    in.sigma_hat = Matrix::Constant(1, 1, s2);
    in.periods = T;
    const double a = s2 + eta * q0;
    const double expected = m * m * s2 / (a * a) / std::pow(1.0 - s2 / (T * a), 2);
    CHECK(estimate_d2(in, eta, Matrix::Constant(1, 1, q0)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("correction blowup when eta is too small") {
    std::mt19937_64 rng(2);
    EstimationInputs in = random_inputs(30, 20, rng);
    in.periods = 10;  // fewer periods than the effective rank of the window
    try {
        estimate_d1(in, 1e-8, Matrix::Identity(30, 30));
        FAIL("expected correction blowup");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CorrectionBlowup);
    }
}

TEST_CASE("spectral sweep agrees with direct evaluation") {
    std::mt19937_64 rng(3);
    for (bool constrained : {true, false}) {
        const EstimationInputs in = random_inputs(8, 40, rng, constrained);
        const Matrix q = random_spd(8, rng);
        const SpectralSweep sweep(in, q);
        for (double eta : {0.001, 0.1, 3.0}) {
            const GridPoint g = sweep.evaluate(eta);
            REQUIRE(g.valid);
            CHECK(g.d1_hat == doctest::Approx(estimate_d1(in, eta, q)).epsilon(1e-9));
            CHECK(g.d2_hat == doctest::Approx(estimate_d2(in, eta, q)).epsilon(1e-9));
        }
    }
}

TEST_CASE("eta selection") {
    std::mt19937_64 rng(4);
    const EstimationInputs in = random_inputs(6, 60, rng);
    const Matrix q = Matrix::Identity(6, 6);
    const EtaSelection one = select_eta({0.5}, q, in);
    CHECK(one.eta_star == 0.5);
    CHECK(one.estimate.theta_hat == doctest::Approx(estimate_sharpe(in, 0.5, q).theta_hat).epsilon(1e-9));

    const std::vector<double> grid{0.001, 0.01, 0.1, 1.0, 10.0};
    const EtaSelection sel = select_eta(grid, q, in);
    for (const GridPoint& g : sel.curve)
        if (g.valid) CHECK(g.theta_hat <= sel.estimate.theta_hat + 1e-15);

    CHECK(argmax_larger_on_ties({1.0, 3.0, 3.0, 2.0}) == 2);
    CHECK(argmax_larger_on_ties({5.0}) == 0);

    EstimationInputs dead;
    dead.mu_hat = Eigen::Vector2d(1, 0);
    dead.sigma_hat = Matrix::Zero(2, 2);
    dead.periods = 10;
    try {
        select_eta({1.0, 2.0}, Matrix::Identity(2, 2), dead);
        FAIL("expected selection error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Selection);
    }
}

TEST_CASE("regularizer selection") {
    std::mt19937_64 rng(5);
    const Index p = 5, T = 40;
    const PanelBundle window = make_bundle(0.05 * random_matrix(T, p, rng), random_matrix(T, p, rng));
    const EstimationInputs in = estimation_inputs(window, 0.0);

    SUBCASE("single candidate matches select_eta") {
        const RegularizerSpec id = RegularizerSpec::with_default_grid(RegularizerKind::Identity);
        const SelectionResult r = select_regularizer({id}, window, in);
        const EtaSelection e = select_eta(id.eta_grid, Matrix::Identity(p, p), in);
        CHECK(r.best.eta == e.eta_star);
        CHECK(r.best.theta_hat == doctest::Approx(e.estimate.theta_hat).epsilon(1e-12));
    }
    SUBCASE("unbuildable candidate is skipped") {
        const SelectionResult r = select_regularizer(
            {RegularizerSpec::with_default_grid(RegularizerKind::PopulationSigma),
             RegularizerSpec::with_default_grid(RegularizerKind::Identity)},
            window, in);
        CHECK(r.best_index == 1);
        CHECK_FALSE(r.per_candidate[0].valid);
        CHECK_FALSE(r.per_candidate[0].failure.empty());
    }
    SUBCASE("best is the maximum over candidates") {
        const SelectionResult r = select_regularizer(default_adaptive_candidates(), window, in);
        for (const CandidateResult& c : r.per_candidate)
            if (c.valid) CHECK(c.theta_hat <= r.best.theta_hat);
    }
}

TEST_CASE("invariances") {
    std::mt19937_64 rng(6);
    const EstimationInputs in = random_inputs(7, 50, rng);
    const Matrix q = random_spd(7, rng);
    const double base = estimate_sharpe(in, 0.2, q).theta_hat;

    EstimationInputs scaled = in;
    scaled.s_tilde_hat = -3.5 * *in.s_tilde_hat;
    CHECK(estimate_sharpe(scaled, 0.2, q).theta_hat == doctest::Approx(base).epsilon(1e-10));

    CHECK(estimate_sharpe(in, 0.2 / 4.0, 4.0 * q).theta_hat == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("estimates are continuous in eta") {
    std::mt19937_64 rng(7);
    const EstimationInputs in = random_inputs(6, 60, rng);
    const SpectralSweep sweep(in, Matrix::Identity(6, 6));
    for (double eta = 0.01; eta < 10.0; eta *= 1.5) {
        const GridPoint a = sweep.evaluate(eta);
        const GridPoint b = sweep.evaluate(eta * (1.0 + 1e-7));
        CHECK(std::abs(a.d1_hat - b.d1_hat) <= 1e-5 * (std::abs(a.d1_hat) + 1e-12));
        CHECK(std::abs(a.d2_hat - b.d2_hat) <= 1e-5 * (std::abs(a.d2_hat) + 1e-12));
    }
}
