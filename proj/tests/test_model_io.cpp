#include "support.hpp"

#include "esgmv/model_io.hpp"

#include <doctest.h>

#include <sstream>

using namespace esgmv;
using namespace esgmv::test;

TEST_CASE("model round trip is bit-identical") {
    std::mt19937_64 rng(1);
    PopulationModel pop = random_population(7, rng, 0.73);
    pop.returns.mu(0) = 1.0 / 3.0;
    pop.returns.sigma(0, 0) = 1e-300;
    std::stringstream buf;
    write_model(buf, pop);
    const PopulationModel back = read_model(buf);
    CHECK(back.returns.mu == pop.returns.mu);
    CHECK(back.returns.sigma == pop.returns.sigma);
    CHECK(back.esg.s == pop.esg.s);
    CHECK(back.esg.omega == pop.esg.omega);
    CHECK(back.esg.s_bar == pop.esg.s_bar);

    const auto path = scratch_dir("model_io") / "model.txt";
    write_model(path, pop);
    CHECK(read_model(path).returns.sigma == pop.returns.sigma);
}

TEST_CASE("malformed model files") {
    std::mt19937_64 rng(2);
    std::stringstream buf;
    write_model(buf, random_population(3, rng));
    const std::string good = buf.str();

    auto code_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_model(in);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Numerical;  // sentinel: no error raised
    };
    std::string bad_version = good;
    bad_version.replace(bad_version.find(" 1"), 2, " 9");
    CHECK(code_of(bad_version) == ErrorCode::Format);
    CHECK(code_of(good.substr(0, good.size() / 2)) == ErrorCode::Format);
    CHECK(code_of("hello\n") == ErrorCode::Format);

    try {
        read_model(scratch_dir("model_io_missing") / "absent.txt");
        FAIL("expected io error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Io);
    }
}
