#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "support.hpp"
#include "udw/state.hpp"

using namespace udw;
using cd = std::complex<double>;

namespace {

PairAmplitudes amp(cd c, cd x) {
    PairAmplitudes p;
    p.c = c;
    p.x = x;
    p.distances = {1.0, 2.0};
    return p;
}

std::array<PairAmplitudes, 3> amps(cd cab, cd cbc, cd cac, cd xab, cd xbc, cd xac) {
    return {amp(cab, xab), amp(cbc, xbc), amp(cac, xac)};
}

TripartiteState random_state(testsupport::Rng& rng) {
    Probabilities p{rng.uniform(0, 0.2), rng.uniform(0, 0.2), rng.uniform(0, 0.2)};
    auto rc = [&] { return cd{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)}; };
    return assemble_state(p, amps(rc(), rc(), rc(), rc(), rc(), rc()));
}

} // namespace

TEST_CASE("basis index order") {
    CHECK(basis_index(0, 0, 0) == 0);
    CHECK(basis_index(0, 0, 1) == 1);
    CHECK(basis_index(0, 1, 0) == 2);
    CHECK(basis_index(1, 0, 0) == 3);
    CHECK(basis_index(0, 1, 1) == 4);
    CHECK(basis_index(1, 0, 1) == 5);
    CHECK(basis_index(1, 1, 0) == 6);
    CHECK(basis_index(1, 1, 1) == 7);
}

TEST_CASE("zero interaction gives the vacuum projector") {
    const auto st = assemble_state({0, 0, 0}, amps(0, 0, 0, 0, 0, 0));
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            CHECK(st.rho[i][j] == (i == 0 && j == 0 ? cd{1.0, 0.0} : cd{0.0, 0.0}));
    CHECK(l1_coherence(st.rho) == 0.0);
    const auto add = additivity_check(st);
    CHECK(add.lhs == 0.0);
    CHECK(add.rhs == 0.0);
}

TEST_CASE("entry placement and sparsity pattern") {
    const cd cab{0.01, 0.002}, cbc{0.02, -0.001}, cac{0.015, 0.0};
    const cd xab{-0.03, 0.09}, xbc{-0.02, 0.05}, xac{-0.01, 0.02};
    const auto st = assemble_state({0.01, 0.02, 0.03}, amps(cab, cbc, cac, xab, xbc, xac));

    CHECK(st.rho[0][0] == cd{1.0 - 0.06, 0.0});
    CHECK(st.rho[1][1] == cd{0.03, 0.0}); // |001> -> P_C
    CHECK(st.rho[2][2] == cd{0.02, 0.0}); // |010> -> P_B
    CHECK(st.rho[3][3] == cd{0.01, 0.0}); // |100> -> P_A
    CHECK(st.rho[2][1] == cbc);
    CHECK(st.rho[3][1] == cac);
    CHECK(st.rho[3][2] == cab);
    CHECK(st.rho[4][0] == xbc);
    CHECK(st.rho[5][0] == xac);
    CHECK(st.rho[6][0] == xab);

    // exact hermiticity and trace by construction
    double trace = 0.0;
    for (int i = 0; i < 8; ++i) trace += st.rho[i][i].real();
    CHECK(std::abs(trace - 1.0) < 1e-15);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            CHECK(st.rho[i][j] == std::conj(st.rho[j][i]));

    // everything off the pattern is exactly zero
    const bool on_pattern[8][8] = {
        {1, 0, 0, 0, 1, 1, 1, 0},
        {0, 1, 1, 1, 0, 0, 0, 0},
        {0, 1, 1, 1, 0, 0, 0, 0},
        {0, 1, 1, 1, 0, 0, 0, 0},
        {1, 0, 0, 0, 0, 0, 0, 0},
        {1, 0, 0, 0, 0, 0, 0, 0},
        {1, 0, 0, 0, 0, 0, 0, 0},
        {0, 0, 0, 0, 0, 0, 0, 0},
    };
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            if (!on_pattern[i][j]) CHECK(st.rho[i][j] == cd{0.0, 0.0});
}

TEST_CASE("pair reduction recovers the pair data and the single-detector state") {
    const cd cab{0.01, 0.002}, cbc{0.02, -0.001}, cac{0.015, 0.0};
    const cd xab{-0.03, 0.09}, xbc{-0.02, 0.05}, xac{-0.01, 0.02};
    const Probabilities p{0.01, 0.02, 0.03};
    const auto st = assemble_state(p, amps(cab, cbc, cac, xab, xbc, xac));

    const Mat4 rab = reduce_pair(st, DetectorPair::AB);
    CHECK(rab[0][0] == cd{1.0 - p.a - p.b, 0.0});
    CHECK(rab[1][1] == cd{p.b, 0.0});
    CHECK(rab[2][2] == cd{p.a, 0.0});
    CHECK(rab[3][3] == cd{0.0, 0.0});
    CHECK(rab[2][1] == cab);
    CHECK(rab[3][0] == xab);
    // trace one
    cd tr{0, 0};
    for (int i = 0; i < 4; ++i) tr += rab[i][i];
    CHECK(std::abs(tr - 1.0) < 1e-15);
    // off-diagonals not fed by the pair are zero
    CHECK(rab[1][0] == cd{0.0, 0.0});
    CHECK(rab[2][0] == cd{0.0, 0.0});
    CHECK(rab[3][1] == cd{0.0, 0.0});
    CHECK(rab[3][2] == cd{0.0, 0.0});

    const Mat4 rbc = reduce_pair(st, DetectorPair::BC);
    CHECK(rbc[2][1] == cbc);
    CHECK(rbc[3][0] == xbc);
    const Mat4 rac = reduce_pair(st, DetectorPair::AC);
    CHECK(rac[2][1] == cac);
    CHECK(rac[3][0] == xac);

    // reduce once more: single detector A is diag(1 - P_A, P_A)
    // (trace the 4x4 over its second slot)
    cd a00 = rab[0][0] + rab[1][1];
    cd a11 = rab[2][2] + rab[3][3];
    CHECK(std::abs(a00 - (1.0 - p.a)) < 1e-15);
    CHECK(std::abs(a11 - p.a) < 1e-15);
}

TEST_CASE("l1 coherence") {
    Mat4 m{};
    for (auto& row : m) row.fill({0.0, 0.0});
    m[0][0] = 0.5;
    m[1][1] = 0.5;
    CHECK(l1_coherence(m) == 0.0);
    m[0][1] = cd{0.3, 0.4};
    m[1][0] = std::conj(m[0][1]);
    CHECK(l1_coherence(m) == doctest::Approx(1.0).epsilon(1e-15));

    const cd cab{0.01, 0.002}, cbc{0.02, -0.001}, cac{0.015, 0.0};
    const cd xab{-0.03, 0.09}, xbc{-0.02, 0.05}, xac{-0.01, 0.02};
    const auto st = assemble_state({0.01, 0.02, 0.03}, amps(cab, cbc, cac, xab, xbc, xac));
    const double expect = 2.0 * (std::abs(xab) + std::abs(xbc) + std::abs(xac) +
                                 std::abs(cab) + std::abs(cbc) + std::abs(cac));
    CHECK(l1_coherence(st.rho) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("additivity of pair coherences, randomized") {
    testsupport::Rng rng(123456);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto st = random_state(rng);
        worst = std::max(worst, additivity_check(st).residual);
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("label permutation covariance and phase invariance") {
    testsupport::Rng rng(777);
    for (int i = 0; i < 50; ++i) {
        const Probabilities p{rng.uniform(0, 0.2), rng.uniform(0, 0.2), rng.uniform(0, 0.2)};
        auto rc = [&] { return cd{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)}; };
        const cd cab = rc(), cbc = rc(), cac = rc();
        const cd xab = rc(), xbc = rc(), xac = rc();
        const auto st = assemble_state(p, amps(cab, cbc, cac, xab, xbc, xac));
        // swap labels A <-> C: pairs AB <-> CB (conjugate C entries), AC fixed
        const auto swapped = assemble_state({p.c, p.b, p.a},
                                            amps(std::conj(cbc), std::conj(cab),
                                                 std::conj(cac), xbc, xab, xac));
        CHECK(l1_coherence(swapped.rho) ==
              doctest::Approx(l1_coherence(st.rho)).epsilon(1e-14));

        // a global phase on any single entry leaves the coherence unchanged
        const cd phase = std::exp(cd{0.0, rng.uniform(0, 6.28)});
        const auto rotated = assemble_state(p, amps(cab * phase, cbc, cac, xab, xbc, xac));
        CHECK(l1_coherence(rotated.rho) ==
              doctest::Approx(l1_coherence(st.rho)).epsilon(1e-14));
    }
}

TEST_CASE("perturbativity and probability guards") {
    CHECK_THROWS_AS(assemble_state({0.5, 0.4, 0.2}, amps(0, 0, 0, 0, 0, 0)), regime_error);
    CHECK_THROWS_AS(assemble_state({-1e-6, 0.0, 0.0}, amps(0, 0, 0, 0, 0, 0)),
                    std::logic_error);
    // tiny negative rounding residue is clamped
    const auto st = assemble_state({-1e-13, 0.01, 0.01}, amps(0, 0, 0, 0, 0, 0));
    CHECK(st.probs.a == 0.0);
}

TEST_CASE("eigenvalue diagnostic") {
    // diagonal case
    const auto diag = assemble_state({0.01, 0.02, 0.03}, amps(0, 0, 0, 0, 0, 0));
    const auto ev = state_detail::embedded_eigenvalues(diag.rho);
    CHECK(ev.front() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(ev.back() == doctest::Approx(0.94).epsilon(1e-12));
    CHECK(min_eigenvalue(diag) == doctest::Approx(0.0).epsilon(1e-14));

    // pure X block: arrow matrix with eigenvalues (a +- sqrt(a^2 + 4 r^2))/2
    const cd xab{0.0, 0.04}, xbc{0.03, 0.0}, xac{0.0, -0.02};
    const auto arrow = assemble_state({0.0, 0.0, 0.0}, amps(0, 0, 0, xab, xbc, xac));
    const double r2 = std::norm(xab) + std::norm(xbc) + std::norm(xac);
    const double a = 1.0;
    const double lo = 0.5 * (a - std::sqrt(a * a + 4.0 * r2));
    CHECK(min_eigenvalue(arrow) == doctest::Approx(lo).epsilon(1e-12));

    // eigenvalue sum equals the trace (doubled in the embedding)
    testsupport::Rng rng(31337);
    const auto st = random_state(rng);
    const auto evs = state_detail::embedded_eigenvalues(st.rho);
    double sum = 0.0;
    for (double e : evs) sum += e;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-12));
}
