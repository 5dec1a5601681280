#include "support.hpp"

#include "esgmv/estimators.hpp"
#include "esgmv/simulation.hpp"

#include <doctest.h>

#include <sstream>

using namespace esgmv;
using namespace esgmv::test;

namespace {

PopulationModel small_synthetic(Index p) {
    SyntheticSpec spec;
    spec.assets = p;
    return synthetic_population(spec);
}

SimConfig small_config(Index p, Index T, int reps) {
    SimConfig cfg;
    cfg.p = p;
    cfg.T = T;
    cfg.reps = reps;
    cfg.seed = 11;
    return cfg;
}

}  // namespace

TEST_CASE("substream seeds") {
    CHECK(substream_seed(1, 0) == substream_seed(1, 0));
    CHECK(substream_seed(1, 0) != substream_seed(1, 1));
    CHECK(substream_seed(1, 0) != substream_seed(2, 0));
}

TEST_CASE("market sampler") {
    SUBCASE("degenerate population gives constant panels") {
        PopulationModel pop;
        pop.returns = MomentModel{Vector(Eigen::Vector2d(0.01, 0.02)), Matrix::Zero(2, 2)};
        pop.esg.s = Eigen::Vector2d(0.7, 0.9);
        pop.esg.omega = Matrix::Zero(2, 2);
        std::mt19937_64 rng(1);
        const MarketSampler::Draw d = MarketSampler(pop).draw(5, rng);
        for (Index t = 0; t < 5; ++t) {
            CHECK(d.returns.row(t) == pop.returns.mu.transpose());
            CHECK(d.esg.row(t) == pop.esg.s.transpose());
        }
    }
    SUBCASE("same seed, same panels") {
        const PopulationModel pop = small_synthetic(5);
        const PanelBundle a = sample_market(pop, 20, 7);
        const PanelBundle b = sample_market(pop, 20, 7);
        CHECK(a.returns.values() == b.returns.values());
        CHECK(a.esg.values() == b.esg.values());
        CHECK(a.returns.values() != sample_market(pop, 20, 8).returns.values());
    }
    SUBCASE("moments and independence over many draws") {
        std::mt19937_64 rng(2);
        PopulationModel pop = random_population(3, rng);
        const Index n = 100000;
        std::mt19937_64 draw_rng(3);
        const MarketSampler::Draw d = MarketSampler(pop).draw(n, draw_rng);
        const Vector mean = column_means(d.returns);
        const Matrix cov = sample_covariance(d.returns);
        for (Index i = 0; i < 3; ++i) {
            const double se = std::sqrt(pop.returns.sigma(i, i) / n);
            CHECK(std::abs(mean(i) - pop.returns.mu(i)) <= 3.0 * se);
        }
        const Matrix diff = cov - pop.returns.sigma;
        for (Index i = 0; i < 3; ++i)
            for (Index j = 0; j < 3; ++j) {
                const double se = std::sqrt((pop.returns.sigma(i, i) * pop.returns.sigma(j, j) +
                                             pop.returns.sigma(i, j) * pop.returns.sigma(i, j)) /
                                            n);
                CHECK(std::abs(diff(i, j)) <= 3.0 * se);
            }
        // Cross-correlation between return and ESG draws.
        Matrix joint(n, 6);
        joint << d.returns, d.esg;
        const Matrix c = sample_covariance(joint);
        for (Index i = 0; i < 3; ++i)
            for (Index j = 3; j < 6; ++j)
                CHECK(std::abs(c(i, j) / std::sqrt(c(i, i) * c(j, j))) <= 3.0 / std::sqrt(double(n)));
    }
}

TEST_CASE("psd square root") {
    std::mt19937_64 rng(4);
    const Matrix a = random_spd(5, rng);
    const Matrix r = psd_sqrt(a);
    CHECK((r * r - a).cwiseAbs().maxCoeff() <= 1e-10);
    Matrix indefinite = Matrix::Identity(2, 2);
    indefinite(1, 1) = -1e-9;
    CHECK(psd_sqrt(indefinite)(1, 1) == 0.0);
}

TEST_CASE("calibration") {
    SyntheticSpec spec;
    spec.assets = 100;
    spec.style_var = 0.004;  // two well-separated factors
    spec.style_beta_sd = 1.0;
    const PopulationModel truth = synthetic_population(spec);
    const PanelBundle bundle = sample_market(truth, 400, 3);
    CHECK(calibration_factor_count(bundle) == 2);
    const PopulationModel pop = calibrate(bundle, 0.8);
    CHECK(is_positive_definite(pop.returns.sigma));
    const PopulationModel again = calibrate(bundle, 0.8);
    CHECK(pop.returns.sigma == again.returns.sigma);
    CHECK(pop.esg.omega == again.esg.omega);

    const PanelBundle wide = sample_market(truth, 30, 4);
    const PopulationModel w = calibrate(wide, 0.8);
    Eigen::SelfAdjointEigenSolver<Matrix> es(w.esg.omega);
    CHECK(es.eigenvalues().minCoeff() >= 1e-6 - 1e-12);
}

TEST_CASE("replications") {
    const PopulationModel pop = small_synthetic(30);
    SimConfig cfg = small_config(20, 60, 6);

    const ReplicationTable a = run_replications(cfg, pop);
    const ReplicationTable b = run_replications(cfg, pop);
    std::ostringstream sa, sb;
    a.write_csv(sa);
    b.write_csv(sb);
    CHECK(sa.str() == sb.str());
    CHECK(a.accepted == cfg.reps);
    CHECK(a.rows.size() == all_strategies().size());

    cfg.threads = 1;
    std::ostringstream sc;
    run_replications(cfg, pop).write_csv(sc);
    CHECK(sc.str() == sa.str());

    const PopulationModel sub = population_subset(pop, cfg.p);
    const PortfolioWeights oracle = solve_mv(sub.returns.mu, sub.returns.sigma, cfg.gamma);
    const MetricRow expected = population_metrics(oracle, sub);
    const StrategyRow* o = a.row(Strategy::Oracle);
    REQUIRE(o != nullptr);
    CHECK(std::abs(o->mean.sr - expected.sr) <= 1e-14 * std::abs(expected.sr));
    for (const StrategyRow& r : a.rows)
        if (r.available) CHECK(r.mean.sr <= o->mean.sr + 1e-12);
}

TEST_CASE("filtering is inactive when the oracle already meets the target") {
    PopulationModel pop = small_synthetic(20);
    pop.esg.s_bar = -10.0;  // every portfolio clears the bar
    SimConfig cfg = small_config(20, 60, 4);
    cfg.s_bar = -10.0;
    const ReplicationTable t = run_replications(cfg, pop);
    CHECK_FALSE(t.filter_active);
    CHECK(t.filtered == 0);
    for (const DrawLog& d : t.log) CHECK_FALSE(d.filtered);
}

TEST_CASE("sample strategies are unavailable when p >= T") {
    const PopulationModel pop = small_synthetic(30);
    SimConfig cfg = small_config(30, 20, 2);
    const ReplicationTable t = run_replications(cfg, pop);
    CHECK_FALSE(t.row(Strategy::Sample)->available);
    CHECK_FALSE(t.row(Strategy::MmvSample)->available);
    CHECK(t.row(Strategy::RemvHat)->available);
}

TEST_CASE("Sharpe curves") {
    const PopulationModel pop = small_synthetic(60);
    SimConfig cfg = small_config(60, 120, 30);
    const SrCurve pop_sigma = sr_curve(pop, RegularizerSpec::with_default_grid(RegularizerKind::PopulationSigma), cfg);
    for (std::size_t i = 1; i < pop_sigma.eta.size(); ++i)
        CHECK(pop_sigma.mean_theta_star[i] >= pop_sigma.mean_theta_star[i - 1] - 1e-12);

    const SrCurve identity = sr_curve(pop, RegularizerSpec::with_default_grid(RegularizerKind::Identity), cfg);
    const std::size_t best = argmax_larger_on_ties(identity.mean_theta_star);
    CHECK(best > 0);
    CHECK(best + 1 < identity.eta.size());
}

TEST_CASE("quantile") {
    CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
    CHECK(quantile({1.0, 2.0}, 0.25) == doctest::Approx(1.25));
    CHECK(quantile({4.0}, 0.9) == 4.0);
    CHECK_THROWS_AS(quantile({}, 0.5), Error);
}
