#include "esgmv/market_data.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace esgmv {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == ',' && !quoted) {
            out.push_back(cell);
            cell.clear();
        } else if (ch != '\r') {
            cell.push_back(ch);
        }
    }
    out.push_back(cell);
    return out;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

double parse_cell(const std::string& raw, const std::filesystem::path& path, std::size_t line_no) {
    const std::string cell = trim(raw);
    if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw Error(ErrorCode::Format, path.string() + ":" + std::to_string(line_no) +
                                           ": cannot parse number '" + cell + "'");
    }
    return value;
}

void check_sorted_unique(const std::vector<std::string>& dates, const std::string& what) {
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (!(dates[i - 1] < dates[i])) {
            throw Error(ErrorCode::Format,
                        what + ": dates must be strictly increasing (at '" + dates[i] + "')");
        }
    }
}

}  // namespace

Panel::Panel(Matrix values, std::vector<std::string> asset_ids, std::vector<std::string> dates)
    : values_(std::move(values)), asset_ids_(std::move(asset_ids)), dates_(std::move(dates)) {
    if (values_.rows() < 2 || values_.cols() < 2) {
        throw Error(ErrorCode::DegenerateUniverse,
                    "panel needs at least 2 periods and 2 assets, got " +
                        std::to_string(values_.rows()) + "x" + std::to_string(values_.cols()));
    }
    if (static_cast<Index>(asset_ids_.size()) != values_.cols() ||
        static_cast<Index>(dates_.size()) != values_.rows()) {
        throw Error(ErrorCode::Parameter, "panel labels do not match matrix shape");
    }
    if (!values_.allFinite()) throw Error(ErrorCode::Format, "panel contains non-finite values");
    check_sorted_unique(dates_, "panel");
    std::set<std::string> ids(asset_ids_.begin(), asset_ids_.end());
    if (ids.size() != asset_ids_.size()) throw Error(ErrorCode::Format, "duplicate asset ids");
}

Panel Panel::window(Index first, Index count) const {
    if (first < 0 || count < 0 || first + count > periods()) {
        throw Error(ErrorCode::Parameter, "window out of range");
    }
    std::vector<std::string> d(dates_.begin() + first, dates_.begin() + first + count);
    return Panel(values_.middleRows(first, count), asset_ids_, std::move(d));
}

Panel Panel::select_assets(const std::vector<Index>& columns) const {
    Matrix v(periods(), static_cast<Index>(columns.size()));
    std::vector<std::string> ids;
    ids.reserve(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        v.col(static_cast<Index>(j)) = values_.col(columns[j]);
        ids.push_back(asset_ids_[static_cast<std::size_t>(columns[j])]);
    }
    return Panel(std::move(v), std::move(ids), dates_);
}

void PanelBundle::validate() const {
    if (returns.dates() != esg.dates() || risk_free.size() != returns.periods()) {
        throw Error(ErrorCode::Alignment, "return, ESG and risk-free date indices differ");
    }
    if (returns.asset_ids() != esg.asset_ids()) {
        throw Error(ErrorCode::Alignment, "return and ESG panels list different assets");
    }
}

PanelBundle PanelBundle::window(Index first, Index count) const {
    return PanelBundle{ReturnPanel(returns.window(first, count)), EsgPanel(esg.window(first, count)),
                       risk_free.segment(first, count)};
}

RawTable read_wide_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());

    RawTable table;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw Error(ErrorCode::Format, path.string() + ": empty file");
    ++line_no;
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // BOM
    auto header = split_csv_line(line);
    if (header.size() < 2) throw Error(ErrorCode::Format, path.string() + ": header needs a date column and at least one value column");
    for (std::size_t j = 1; j < header.size(); ++j) table.columns.push_back(trim(header[j]));

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw Error(ErrorCode::Format, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                               std::to_string(header.size()) + " cells, got " +
                                               std::to_string(cells.size()));
        }
        table.dates.push_back(trim(cells[0]));
        std::vector<double> row;
        row.reserve(cells.size() - 1);
        for (std::size_t j = 1; j < cells.size(); ++j) row.push_back(parse_cell(cells[j], path, line_no));
        rows.push_back(std::move(row));
    }
    table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(table.columns.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            table.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    check_sorted_unique(table.dates, path.string());
    return table;
}

PanelBundle align_tables(const RawTable& returns, const RawTable& esg, const RawTable& riskfree,
                         MissingDataPolicy /*policy*/) {
    if (riskfree.columns.size() != 1) {
        throw Error(ErrorCode::Format, "risk-free table must have exactly one value column");
    }

    // Date intersection, kept in sorted order.
    std::unordered_map<std::string, Index> esg_row, rf_row;
    for (std::size_t i = 0; i < esg.dates.size(); ++i) esg_row.emplace(esg.dates[i], static_cast<Index>(i));
    for (std::size_t i = 0; i < riskfree.dates.size(); ++i) rf_row.emplace(riskfree.dates[i], static_cast<Index>(i));
    std::vector<std::string> dates;
    std::vector<std::array<Index, 3>> rows;
    for (std::size_t i = 0; i < returns.dates.size(); ++i) {
        const auto& d = returns.dates[i];
        auto e = esg_row.find(d);
        auto r = rf_row.find(d);
        if (e == esg_row.end() || r == rf_row.end()) continue;
        dates.push_back(d);
        rows.push_back({static_cast<Index>(i), e->second, r->second});
    }
    if (dates.empty()) throw Error(ErrorCode::Alignment, "return, ESG and risk-free files share no dates");

    std::unordered_map<std::string, Index> esg_col;
    for (std::size_t j = 0; j < esg.columns.size(); ++j) esg_col.emplace(esg.columns[j], static_cast<Index>(j));

    // Whole-asset drop: any missing return or ESG cell in the window removes the asset.
    std::vector<std::string> ids;
    std::vector<std::pair<Index, Index>> cols;
    for (std::size_t j = 0; j < returns.columns.size(); ++j) {
        auto it = esg_col.find(returns.columns[j]);
        if (it == esg_col.end()) continue;
        bool complete = true;
        for (const auto& row : rows) {
            if (std::isnan(returns.values(row[0], static_cast<Index>(j))) ||
                std::isnan(esg.values(row[1], it->second))) {
                complete = false;
                break;
            }
        }
        if (!complete) continue;
        ids.push_back(returns.columns[j]);
        cols.emplace_back(static_cast<Index>(j), it->second);
    }
    if (ids.size() < 2) {
        throw Error(ErrorCode::DegenerateUniverse,
                    std::to_string(ids.size()) + " asset(s) survive the missing-data filter, need at least 2");
    }

    const auto T = static_cast<Index>(dates.size());
    const auto p = static_cast<Index>(ids.size());
    Matrix r(T, p), a(T, p);
    Vector rf(T);
    for (Index t = 0; t < T; ++t) {
        const auto& row = rows[static_cast<std::size_t>(t)];
        const double rate = riskfree.values(row[2], 0);
        if (std::isnan(rate)) throw Error(ErrorCode::Format, "missing risk-free rate on " + dates[static_cast<std::size_t>(t)]);
        rf(t) = rate;
        for (Index j = 0; j < p; ++j) {
            const auto& c = cols[static_cast<std::size_t>(j)];
            r(t, j) = returns.values(row[0], c.first) - rate;
            a(t, j) = esg.values(row[1], c.second);
        }
    }
    PanelBundle bundle{ReturnPanel(std::move(r), ids, dates), EsgPanel(std::move(a), ids, dates), std::move(rf)};
    bundle.validate();
    return bundle;
}

PanelBundle load_panels(const std::filesystem::path& returns_path, const std::filesystem::path& esg_path,
                        const std::filesystem::path& riskfree_path, MissingDataPolicy policy) {
    return align_tables(read_wide_csv(returns_path), read_wide_csv(esg_path), read_wide_csv(riskfree_path),
                        policy);
}

EsgPanel standardize_esg(const EsgPanel& panel) {
    const Matrix& v = panel.values();
    const double T = static_cast<double>(v.rows());
    Matrix z(v.rows(), v.cols());
    for (Index j = 0; j < v.cols(); ++j) {
        const double mean = v.col(j).mean();
        const double var = (v.col(j).array() - mean).square().sum() / (T - 1.0);
        const double sd = std::sqrt(var);
        if (!(sd > 0.0) || sd <= 1e-14 * std::max(1.0, std::abs(mean))) {
            throw Error(ErrorCode::ZeroVariance,
                        "ESG scores of asset '" + panel.asset_ids()[static_cast<std::size_t>(j)] + "' are constant");
        }
        z.col(j) = (v.col(j).array() - mean) / sd;
    }
    return EsgPanel(std::move(z), panel.asset_ids(), panel.dates());
}

void write_wide_csv(const std::filesystem::path& path, const Panel& panel) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << "date";
    for (const auto& id : panel.asset_ids()) out << ',' << id;
    out << '\n' << std::setprecision(17);
    for (Index t = 0; t < panel.periods(); ++t) {
        out << panel.dates()[static_cast<std::size_t>(t)];
        for (Index j = 0; j < panel.assets(); ++j) out << ',' << panel.values()(t, j);
        out << '\n';
    }
}

}  // namespace esgmv
