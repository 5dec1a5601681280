#pragma once

#include "esgmv/market_data.hpp"
#include "esgmv/population.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace esgmv::test {

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = n(rng);
    return m;
}

inline Vector random_vector(Index n, std::mt19937_64& rng) { return random_matrix(n, 1, rng).col(0); }

/// Well-conditioned SPD matrix: A A'/p plus a diagonal floor.
inline Matrix random_spd(Index p, std::mt19937_64& rng, double floor = 0.1) {
    const Matrix a = random_matrix(p, p, rng);
    return a * a.transpose() / static_cast<double>(p) + floor * Matrix::Identity(p, p);
}

inline std::vector<std::string> ids(Index p, const std::string& prefix = "A") {
    std::vector<std::string> out;
    for (Index i = 0; i < p; ++i) out.push_back(prefix + std::to_string(i + 1));
    return out;
}

inline std::vector<std::string> dates(Index T) {
    std::vector<std::string> out;
    for (Index t = 0; t < T; ++t) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "d%05ld", static_cast<long>(t + 1));
        out.emplace_back(buf);
    }
    return out;
}

inline PanelBundle make_bundle(const Matrix& returns, const Matrix& esg, Vector rf = Vector()) {
    const Index T = returns.rows();
    if (rf.size() == 0) rf = Vector::Zero(T);
    return PanelBundle{ReturnPanel(returns, ids(returns.cols()), dates(T)), EsgPanel(esg, ids(esg.cols()), dates(T)),
                       rf};
}

/// Small population with ESG on a provider-like scale around 0.75.
inline PopulationModel random_population(Index p, std::mt19937_64& rng, double s_bar = 0.8) {
    PopulationModel pop;
    pop.returns.mu = 0.01 * random_vector(p, rng).array() + 0.005;
    pop.returns.sigma = 0.002 * random_spd(p, rng);
    std::uniform_real_distribution<double> u(0.5, 1.0);
    pop.esg.s = Vector::NullaryExpr(p, [&] { return u(rng); });
    pop.esg.omega = 0.01 * random_spd(p, rng);
    pop.esg.s_bar = s_bar;
    return pop;
}

/// Brute-force maximizer of w'm - (gamma/2) w'A w subject to C w = 0 (rows of
/// C are the constraints), from the bordered KKT system solved by full-pivot LU.
inline Vector kkt_solve(const Vector& m, const Matrix& a, double gamma, const Matrix& c) {
    const Index p = m.size();
    const Index k = c.rows();
    Matrix kkt = Matrix::Zero(p + k, p + k);
    kkt.topLeftCorner(p, p) = gamma * a;
    kkt.topRightCorner(p, k) = c.transpose();
    kkt.bottomLeftCorner(k, p) = c;
    Vector rhs = Vector::Zero(p + k);
    rhs.head(p) = m;
    return kkt.fullPivLu().solve(rhs).head(p);
}

/// Fresh empty directory under the system temp folder.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("esgmv_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace esgmv::test
