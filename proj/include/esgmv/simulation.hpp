#pragma once

#include "esgmv/population.hpp"
#include "esgmv/regularizers.hpp"
#include "esgmv/sharpe_oracle.hpp"
#include "esgmv/sr_estimator.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace esgmv {

/// Counter-based substream seed: splitmix64 applied to seed + (index + 1)
/// times the golden-ratio increment. Replication r can be replayed alone.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

/// Parameters of the calibrated-style synthetic population: a two-factor
/// return model with monthly magnitudes and ESG means tilted against alpha.
struct SyntheticSpec {
    Index assets = 180;
    double s_bar = 0.8;
    std::uint64_t seed = 2;
    double market_var = 0.002;
    double style_var = 0.0006;
    double market_beta_mean = 1.0;
    double market_beta_sd = 0.3;
    double style_beta_sd = 0.5;
    double idio_var_lo = 0.0015;
    double idio_var_hi = 0.006;
    double market_premium = 0.006;
    double style_premium = 0.002;
    double alpha_mean = 0.004;
    double alpha_sd = 0.004;
    double esg_scale = 0.5;        // cross-sectional sd of ESG means
    double esg_alpha_corr = -0.3;  // correlation of ESG means with alpha
    double esg_sd_lo = 0.15;       // per-asset ESG noise sd range
    double esg_sd_hi = 0.35;
    double esg_common_corr = 0.2;
    /// 1 for decimal returns, 100 for percent. Scales mu by u and Sigma by u^2.
    double return_unit = 1.0;
};

PopulationModel synthetic_population(const SyntheticSpec& spec);

/// Leading `p` assets of a population.
PopulationModel population_subset(const PopulationModel& pop, Index p);

/// Mean from sample means, covariance from POET with the Bai-Ng factor count
/// and threshold 1, ESG moments with a 1e-6 ridge when p > T.
PopulationModel calibrate(const PanelBundle& bundle, double s_bar);

/// Factor count chosen during calibration.
int calibration_factor_count(const PanelBundle& bundle);

/// Symmetric PSD square root with negative eigenvalues clipped at 0.
Matrix psd_sqrt(const Matrix& m);

/// Gaussian draws r_t = mu + Sigma^(1/2) z_t and a_t = s + Omega^(1/2) y_t,
/// returns and ESG independent. Roots are computed once.
class MarketSampler {
public:
    explicit MarketSampler(const PopulationModel& pop);

    struct Draw {
        Matrix returns;  // T x p
        Matrix esg;      // T x p
    };

    Draw draw(Index periods, std::mt19937_64& rng) const;
    PanelBundle bundle(const Draw& d) const;

    const PopulationModel& population() const noexcept { return pop_; }

private:
    PopulationModel pop_;
    Matrix sigma_root_;
    Matrix omega_root_;
};

PanelBundle sample_market(const PopulationModel& pop, Index periods, std::uint64_t seed);

enum class Strategy { Oracle, MmvOracle, Sample, MmvSample, QmvHat, QmvStar, RemvHat, RemvStar };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& label);
std::vector<Strategy> all_strategies();

enum class EtaMode { GridSelect, Fixed };

struct SimConfig {
    Index p = 180;
    Index T = 360;
    int reps = 200;
    double gamma = 5.0;
    double s_bar = 0.8;
    std::uint64_t seed = 1;
    RegularizerSpec q_spec = RegularizerSpec::with_default_grid(RegularizerKind::DiagSampleCov);
    EtaMode eta_mode = EtaMode::GridSelect;
    double fixed_eta = 1.0;
    std::vector<Strategy> strategies = all_strategies();
    bool filter = true;
    int max_draw_factor = 20;  // draws stop at reps * factor
    unsigned threads = 0;      // 0 means default_thread_count()
    EstimatorOptions estimator;

    void validate() const;
    std::vector<double> grid() const;
};

struct StrategyRow {
    Strategy strategy;
    bool available = true;  // false when the strategy cannot run, e.g. sample MV with p >= T
    MetricRow mean;
};

struct DrawLog {
    std::size_t draw = 0;
    bool accepted = false;
    bool filtered = false;
    double sample_esg = 0.0;  // OOS ESG of the sample MV portfolio, NaN when unavailable
    std::string failure;
};

struct ReplicationTable {
    std::vector<StrategyRow> rows;
    int accepted = 0;
    int failed = 0;
    int filtered = 0;
    bool filter_active = false;  // oracle ESG below s_bar
    std::vector<DrawLog> log;
    std::vector<double> eta_hat;   // Re-MV selections per accepted replication
    std::vector<double> eta_star;

    const StrategyRow* row(Strategy s) const;
    void write_csv(std::ostream& out) const;
};

ReplicationTable run_replications(const SimConfig& cfg, const PopulationModel& pop);

struct SrCurve {
    std::vector<double> eta;
    std::vector<double> mean_theta_hat;
    std::vector<double> mean_theta_star;
    std::vector<int> count;   // replications valid at each grid point
    std::vector<double> mean_abs_rel_error;  // mean |theta_hat / theta_star - 1|
    void write_csv(std::ostream& out) const;
};

/// Per grid point means of the estimated and realized Sharpe ratio of the
/// regularized ESG-constrained portfolio, no filtering.
SrCurve sr_curve(const PopulationModel& pop, const RegularizerSpec& q_spec, const SimConfig& cfg);

/// Per config raw samples of argmax theta_star minus argmax theta_hat over
/// the grid. Each config uses the leading cfg.p assets of `pop`.
std::vector<std::vector<double>> eta_gap_distribution(const PopulationModel& pop, const RegularizerSpec& q_spec,
                                                      const std::vector<SimConfig>& cfgs);

void write_eta_gaps_csv(std::ostream& out, const std::vector<SimConfig>& cfgs,
                        const std::vector<std::vector<double>>& gaps);

/// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double prob);

}  // namespace esgmv
