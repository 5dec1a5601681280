#include "support.hpp"

#include "esgmv/market_data.hpp"

#include <doctest.h>

using namespace esgmv;
using namespace esgmv::test;

namespace {

struct Files {
    std::filesystem::path returns, esg, rf;
};

Files write_files(const std::string& name, const std::string& returns, const std::string& esg, const std::string& rf) {
    const auto dir = scratch_dir(name);
    Files f{dir / "returns.csv", dir / "esg.csv", dir / "rf.csv"};
    write_text(f.returns, returns);
    write_text(f.esg, esg);
    write_text(f.rf, rf);
    return f;
}

const char* kRf = "date,rf\n2020-01,0.002\n2020-02,0.001\n2020-03,0\n2020-04,0\n";

}  // namespace

TEST_CASE("missing cell drops the whole asset") {
    const Files f = write_files("drop",
                                "date,A,B,C\n2020-01,0.01,0.02,0.03\n2020-02,0.01,,0.03\n"
                                "2020-03,0.01,0.02,0.03\n2020-04,0.01,0.02,0.03\n",
                                "date,A,B,C\n2020-01,0.5,0.6,0.7\n2020-02,0.5,0.6,0.7\n"
                                "2020-03,0.5,0.6,0.7\n2020-04,0.5,0.6,0.7\n",
                                kRf);
    const PanelBundle b = load_panels(f.returns, f.esg, f.rf);
    CHECK(b.assets() == 2);
    CHECK(b.periods() == 4);
    CHECK(b.returns.asset_ids() == std::vector<std::string>{"A", "C"});
    CHECK(b.esg.asset_ids() == b.returns.asset_ids());
}

TEST_CASE("returns are stored in excess of the risk-free rate") {
    const Files f = write_files("excess", "date,A,B\n2020-01,0.010,0.02\n2020-02,0.0,0.0\n",
                                "date,A,B\n2020-01,0.5,0.6\n2020-02,0.5,0.6\n", kRf);
    const PanelBundle b = load_panels(f.returns, f.esg, f.rf);
    CHECK(b.returns.values()(0, 0) == doctest::Approx(0.008).epsilon(1e-15));
    CHECK(b.risk_free(0) == 0.002);
}

TEST_CASE("disjoint date ranges are an alignment error") {
    const Files f = write_files("disjoint", "date,A,B\n2020-01,0.01,0.02\n2020-02,0,0\n",
                                "date,A,B\n2021-01,0.5,0.6\n2021-02,0.5,0.6\n", kRf);
    try {
        load_panels(f.returns, f.esg, f.rf);
        FAIL("expected alignment error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Alignment);
    }
}

TEST_CASE("fewer than two surviving assets is a degenerate universe") {
    const Files f = write_files("degenerate", "date,A,B\n2020-01,0.01,\n2020-02,0,0\n",
                                "date,A,B\n2020-01,0.5,0.6\n2020-02,0.5,0.6\n", kRf);
    try {
        load_panels(f.returns, f.esg, f.rf);
        FAIL("expected degenerate universe");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateUniverse);
    }
}

TEST_CASE("unparseable and missing files") {
    const Files f = write_files("format", "date,A,B\n2020-01,abc,0.1\n", "date,A,B\n2020-01,0.5,0.6\n", kRf);
    try {
        load_panels(f.returns, f.esg, f.rf);
        FAIL("expected format error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Format);
    }
    try {
        load_panels(f.returns.parent_path() / "nope.csv", f.esg, f.rf);
        FAIL("expected io error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Io);
    }
}

TEST_CASE("column order of the input does not matter beyond permutation") {
    const std::string esg = "date,A,B,C\n2020-01,0.5,0.6,0.7\n2020-02,0.4,0.6,0.8\n";
    const Files f1 = write_files("perm1", "date,A,B,C\n2020-01,0.01,0.02,0.03\n2020-02,0.04,0.05,0.06\n", esg, kRf);
    const Files f2 = write_files("perm2", "date,C,A,B\n2020-01,0.03,0.01,0.02\n2020-02,0.06,0.04,0.05\n", esg, kRf);
    const PanelBundle a = load_panels(f1.returns, f1.esg, f1.rf);
    const PanelBundle b = load_panels(f2.returns, f2.esg, f2.rf);
    REQUIRE(b.returns.asset_ids() == std::vector<std::string>{"C", "A", "B"});
    CHECK(b.esg.asset_ids() == b.returns.asset_ids());
    CHECK(a.returns.select_assets({2, 0, 1}) == static_cast<const Panel&>(b.returns));
    CHECK(a.esg.select_assets({2, 0, 1}) == static_cast<const Panel&>(b.esg));
    // Determinism.
    CHECK(load_panels(f1.returns, f1.esg, f1.rf) == a);
}

TEST_CASE("standardize_esg") {
    SUBCASE("column (1,2,3) maps to (-1,0,1)") {
        Matrix v(3, 2);
        v << 1, 10, 2, 20, 3, 60;
        const EsgPanel z = standardize_esg(EsgPanel(v, ids(2), dates(3)));
        CHECK(z.values()(0, 0) == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(std::abs(z.values()(1, 0)) < 1e-14);
        CHECK(z.values()(2, 0) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("constant column names the asset") {
        Matrix v(3, 2);
        v << 1, 5, 2, 5, 3, 5;
        try {
            standardize_esg(EsgPanel(v, ids(2), dates(3)));
            FAIL("expected zero variance");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ZeroVariance);
            CHECK(std::string(e.what()).find("A2") != std::string::npos);
        }
    }
    SUBCASE("idempotent") {
        std::mt19937_64 rng(5);
        const EsgPanel raw(random_matrix(20, 4, rng), ids(4), dates(20));
        const EsgPanel once = standardize_esg(raw);
        const EsgPanel twice = standardize_esg(once);
        CHECK((once.values() - twice.values()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("wide csv round trip") {
    std::mt19937_64 rng(9);
    const Panel p(random_matrix(6, 3, rng), ids(3), dates(6));
    const auto dir = scratch_dir("roundtrip");
    write_wide_csv(dir / "p.csv", p);
    const RawTable t = read_wide_csv(dir / "p.csv");
    CHECK(t.columns == p.asset_ids());
    CHECK(t.dates == p.dates());
    CHECK(t.values == p.values());
}

TEST_CASE("panel construction rejects unsorted dates") {
    try {
        Panel(Matrix::Zero(2, 2), ids(2), {"b", "a"});
        FAIL("expected format error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Format);
    }
}
