#include "esgmv/model_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

namespace esgmv {

namespace {

constexpr const char* kMagic = "esg-regmv-model";

void put(std::ostream& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    out << buf;
}

void put_vector(std::ostream& out, const char* tag, const Vector& v) {
    out << tag << '\n';
    for (Index i = 0; i < v.size(); ++i) {
        if (i) out << ' ';
        put(out, v(i));
    }
    out << '\n';
}

void put_matrix(std::ostream& out, const char* tag, const Matrix& m) {
    out << tag << '\n';
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            put(out, m(r, c));
        }
        out << '\n';
    }
}

std::string next_token(std::istream& in, const char* what) {
    std::string tok;
    if (!(in >> tok)) throw Error(ErrorCode::Format, std::string("model file truncated before ") + what);
    return tok;
}

void expect(std::istream& in, const char* tag) {
    const std::string tok = next_token(in, tag);
    if (tok != tag) throw Error(ErrorCode::Format, "model file: expected '" + std::string(tag) + "', got '" + tok + "'");
}

double number(std::istream& in, const char* what) {
    const std::string tok = next_token(in, what);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || errno == ERANGE) {
        throw Error(ErrorCode::Format, "model file: bad number '" + tok + "' in " + what);
    }
    return v;
}

Vector read_vector(std::istream& in, const char* tag, Index n) {
    expect(in, tag);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = number(in, tag);
    return v;
}

Matrix read_matrix(std::istream& in, const char* tag, Index n) {
    expect(in, tag);
    Matrix m(n, n);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < n; ++c) m(r, c) = number(in, tag);
    return m;
}

}  // namespace

void write_model(std::ostream& out, const PopulationModel& pop) {
    pop.validate();
    out << kMagic << ' ' << kModelFormatVersion << '\n';
    out << "assets " << pop.assets() << '\n';
    out << "s_bar ";
    put(out, pop.esg.s_bar);
    out << '\n';
    put_vector(out, "mu", pop.returns.mu);
    put_matrix(out, "sigma", pop.returns.sigma);
    put_vector(out, "esg_mean", pop.esg.s);
    put_matrix(out, "esg_cov", pop.esg.omega);
    out << "end\n";
}

void write_model(const std::filesystem::path& path, const PopulationModel& pop) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write model file " + path.string());
    write_model(out, pop);
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

PopulationModel read_model(std::istream& in) {
    expect(in, kMagic);
    const double version = number(in, "version");
    if (version != kModelFormatVersion) {
        throw Error(ErrorCode::Format, "unsupported model file version " + std::to_string(version));
    }
    expect(in, "assets");
    const double assets = number(in, "assets");
    if (!(assets >= 1.0) || assets != static_cast<double>(static_cast<Index>(assets))) {
        throw Error(ErrorCode::Format, "model file: asset count must be a positive integer");
    }
    const auto p = static_cast<Index>(assets);
    PopulationModel pop;
    expect(in, "s_bar");
    pop.esg.s_bar = number(in, "s_bar");
    pop.returns.mu = read_vector(in, "mu", p);
    pop.returns.sigma = read_matrix(in, "sigma", p);
    pop.esg.s = read_vector(in, "esg_mean", p);
    pop.esg.omega = read_matrix(in, "esg_cov", p);
    expect(in, "end");
    pop.validate();
    return pop;
}

PopulationModel read_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open model file " + path.string());
    return read_model(in);
}

}  // namespace esgmv
