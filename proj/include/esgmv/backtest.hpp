#pragma once

#include "esgmv/market_data.hpp"
#include "esgmv/regularizers.hpp"
#include "esgmv/sr_estimator.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace esgmv {

enum class BacktestStrategy {
    EqualWeight,   // 1/N
    Sample,        // MV on sample moments
    MmvSample,     // ESG-constrained MV on sample moments
    RemvAdaptive,  // regularized constrained, adaptive (Q, eta)
    QmvAdaptive,   // regularized unconstrained, adaptive (Q, eta)
    MvPoet,
    MmvPoet,
    MvLinear,
    MmvLinear,
    MvNonlinear,   // needs a nonlinear-shrinkage plugin
    MmvNonlinear,
};

std::string to_string(BacktestStrategy s);
BacktestStrategy parse_backtest_strategy(const std::string& label);
std::vector<BacktestStrategy> all_backtest_strategies();

/// How the ESG level enters constrained strategies. `Inequality` keeps the
/// unconstrained counterpart when its in-sample ESG already meets the target.
enum class EsgConstraintMode { Equality, Inequality };

/// What happens when a holding period loses the whole portfolio value.
/// `Fail` marks the strategy failed; `Restart` re-buys the target from cash
/// at the next period, charging a full setup trade.
enum class WipeoutPolicy { Fail, Restart };

struct BacktestConfig {
    Index window = 90;
    Index hold = 1;
    double cost_rate = 0.001;
    double s_bar = 0.8;
    double gamma = 5.0;
    std::vector<BacktestStrategy> strategies = all_backtest_strategies();
    /// Skip the setup cost of the very first allocation.
    bool free_first_trade = false;
    /// z-score ESG per asset with in-window mean and sd; the same map is
    /// applied to the held-out scores.
    bool standardize_esg = false;
    double poet_threshold = 0.5;
    std::vector<RegularizerSpec> adaptive_candidates = default_adaptive_candidates();
    /// Covariance estimate from the window for the Nonlinear benchmarks.
    CustomBuilder nonlinear_covariance;
    EsgConstraintMode esg_mode = EsgConstraintMode::Equality;
    WipeoutPolicy wipeout = WipeoutPolicy::Fail;
    EstimatorOptions estimator;
    unsigned threads = 0;  // 0 means default_thread_count()

    void validate() const;
};

/// One decision node: target weights, pre-trade drifted weights, trade size.
struct NodeRecord {
    Index period = 0;       // first held-out row
    std::string date;       // date of that row
    Vector target;
    Vector drifted;         // w+ before trading, zero at the first node
    double trade = 0.0;     // sum |target - drifted|
    std::string q_kind;     // adaptive strategies only
    double eta = 0.0;
};

struct PeriodRecord {
    std::string date;
    double excess = 0.0;      // w'r before costs
    double net_excess = 0.0;  // after proportional costs
    double esg = 0.0;
};

struct StrategyReport {
    BacktestStrategy strategy;
    bool failed = false;
    std::string reason;
    double sr = 0.0;
    double sr_tc = 0.0;
    double esg_m = 0.0;
    double esg_lq = 0.0;
    double sd_esg = 0.0;
    double to = 0.0;
    int restarts = 0;  // wipe-outs absorbed under WipeoutPolicy::Restart
    std::vector<NodeRecord> nodes;
    std::vector<PeriodRecord> periods;
};

struct BacktestReport {
    std::vector<std::string> asset_ids;
    std::vector<StrategyReport> rows;

    const StrategyReport* row(BacktestStrategy s) const;
    /// strategy,SR,SR_tc,ESG_M,ESG_LQ,SD_esg,TO with "-" for failed rows.
    void write_csv(std::ostream& out) const;
    /// Per-node weights, one row per (strategy, node).
    void write_audit_csv(std::ostream& out) const;
    /// Per-period return and ESG streams.
    void write_streams_csv(std::ostream& out) const;
};

BacktestReport rolling_backtest(const PanelBundle& bundle, const BacktestConfig& cfg);

/// Target weights at the node whose first held-out row is `period`, using
/// rows [period - window, period) only. Budget-normalized.
NodeRecord node_weights(const PanelBundle& bundle, const BacktestConfig& cfg, BacktestStrategy s, Index period);

/// Buy-and-hold drift w_i (1 + r_i) / (1 + w'r) on gross simple returns.
Vector drift_weights(const Vector& w_prev, const Vector& gross_returns);

/// (1 - cost_rate * sum |w_new - w_drifted|)(1 + r_gross) - 1.
double net_return(double r_gross, const Vector& w_new, const Vector& w_drifted, double cost_rate);

struct Rebalance {
    Vector target;
    Vector drifted;
};

/// Mean L1 trade over the given rebalances; 0 when there are none.
double turnover(const std::vector<Rebalance>& rebalances);

struct OosMetrics {
    double sr = 0.0;
    double esg_m = 0.0;
    double esg_lq = 0.0;
    double sd_esg = 0.0;
};

/// Mean over sample sd (divisor n - 1). Throws ZeroVariance on a flat stream.
double stream_sharpe(const std::vector<double>& returns);

/// inf{x : share of stream <= x exceeds 1/4}.
double lower_quartile(std::vector<double> values);

OosMetrics oos_metrics(const std::vector<double>& returns, const std::vector<double>& esg);

}  // namespace esgmv
