#pragma once

#include <complex>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsupport {

inline std::string fixture_path(const std::string& name) {
    return std::string(UDW_FIXTURE_DIR) + "/" + name;
}

struct ErfFixture {
    std::complex<double> z;
    std::complex<double> erf;
};

inline std::vector<ErfFixture> load_erf_fixtures() {
    std::ifstream in(fixture_path("erf_reference.csv"));
    if (!in) throw std::runtime_error("missing erf_reference.csv fixture");
    std::vector<ErfFixture> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        double a, b, c, d;
        char comma;
        ss >> a >> comma >> b >> comma >> c >> comma >> d;
        if (!ss) throw std::runtime_error("malformed fixture line: " + line);
        out.push_back({{a, b}, {c, d}});
    }
    return out;
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
    return std::abs(got - want) / std::abs(want);
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}

// deterministic uniform draws
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    }
};

} // namespace testsupport
