#pragma once

#include "esgmv/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace esgmv {

/// A dates x assets observation matrix with its labels. Construction
/// validates shape, finiteness, strictly increasing dates and unique ids.
class Panel {
public:
    Panel() = default;
    Panel(Matrix values, std::vector<std::string> asset_ids, std::vector<std::string> dates);

    const Matrix& values() const noexcept { return values_; }
    const std::vector<std::string>& asset_ids() const noexcept { return asset_ids_; }
    const std::vector<std::string>& dates() const noexcept { return dates_; }

    Index periods() const noexcept { return values_.rows(); }
    Index assets() const noexcept { return values_.cols(); }

    /// Rows [first, first + count).
    Panel window(Index first, Index count) const;

    /// Column subset in the given order.
    Panel select_assets(const std::vector<Index>& columns) const;

    friend bool operator==(const Panel&, const Panel&) = default;

private:
    Matrix values_;
    std::vector<std::string> asset_ids_;
    std::vector<std::string> dates_;
};

/// Monthly excess returns, dimensionless fractions.
struct ReturnPanel : Panel {
    using Panel::Panel;
    explicit ReturnPanel(Panel p) : Panel(std::move(p)) {}
};

/// ESG scores, provider scale or standardized.
struct EsgPanel : Panel {
    using Panel::Panel;
    explicit EsgPanel(Panel p) : Panel(std::move(p)) {}
};

struct PanelBundle {
    ReturnPanel returns;
    EsgPanel esg;
    Vector risk_free;

    /// Throws Alignment if the three indices disagree.
    void validate() const;
    Index periods() const noexcept { return returns.periods(); }
    Index assets() const noexcept { return returns.assets(); }

    /// Rows [first, first + count) of all three members.
    PanelBundle window(Index first, Index count) const;

    friend bool operator==(const PanelBundle&, const PanelBundle&) = default;
};

enum class MissingDataPolicy { Drop };

/// Raw wide CSV: header "date,<id>,<id>..." and one row per date. Empty
/// cells are NaN.
struct RawTable {
    std::vector<std::string> dates;
    std::vector<std::string> columns;
    Matrix values;
};

RawTable read_wide_csv(const std::filesystem::path& path);

/// Risk-free file: "date,<name>" with a single value column.
PanelBundle load_panels(const std::filesystem::path& returns_path,
                        const std::filesystem::path& esg_path,
                        const std::filesystem::path& riskfree_path,
                        MissingDataPolicy policy = MissingDataPolicy::Drop);

/// Aligns already-parsed tables; load_panels is a thin wrapper over this.
PanelBundle align_tables(const RawTable& returns, const RawTable& esg, const RawTable& riskfree,
                         MissingDataPolicy policy = MissingDataPolicy::Drop);

/// Per-asset z-score over the panel window, sample sd with divisor T-1.
EsgPanel standardize_esg(const EsgPanel& panel);

void write_wide_csv(const std::filesystem::path& path, const Panel& panel);

}  // namespace esgmv
