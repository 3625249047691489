#include "udw/state.hpp"

#include <algorithm>
#include <cmath>

namespace udw {

namespace {

// (a, b, c) bits -> position in the printed basis order.
constexpr int kIndex[2][2][2] = {
    {{0, 1}, {2, 4}},
    {{3, 5}, {6, 7}},
};

double checked_probability(double p) {
    if (std::isnan(p))
        throw std::domain_error("assemble_state: NaN probability");
    if (p < -1e-12)
        throw std::logic_error("assemble_state: probability below the rounding tolerance");
    return p < 0.0 ? 0.0 : p;
}

} // namespace

int basis_index(int a, int b, int c) {
    return kIndex[a][b][c];
}

TripartiteState assemble_state(const Probabilities& probs,
                               const std::array<PairAmplitudes, 3>& pairs) {
    const double pa = checked_probability(probs.a);
    const double pb = checked_probability(probs.b);
    const double pc = checked_probability(probs.c);
    if (pa + pb + pc >= 1.0)
        throw regime_error(
            "assemble_state: P_A + P_B + P_C >= 1; reduce lambda or enlarge the gaps");

    TripartiteState st;
    st.probs = {pa, pb, pc};
    st.pairs = pairs;
    auto& r = st.rho;
    for (auto& row : r) row.fill({0.0, 0.0});

    r[0][0] = 1.0 - (pa + pb + pc);
    r[1][1] = pc;
    r[2][2] = pb;
    r[3][3] = pa;

    const auto& ab = pairs[static_cast<int>(DetectorPair::AB)];
    const auto& bc = pairs[static_cast<int>(DetectorPair::BC)];
    const auto& ac = pairs[static_cast<int>(DetectorPair::AC)];

    r[2][1] = bc.c;
    r[1][2] = std::conj(bc.c);
    r[3][1] = ac.c;
    r[1][3] = std::conj(ac.c);
    r[3][2] = ab.c;
    r[2][3] = std::conj(ab.c);

    r[4][0] = bc.x;
    r[0][4] = std::conj(bc.x);
    r[5][0] = ac.x;
    r[0][5] = std::conj(ac.x);
    r[6][0] = ab.x;
    r[0][6] = std::conj(ab.x);
    return st;
}

Mat4 reduce_pair(const TripartiteState& state, DetectorPair pair) {
    Mat4 out;
    for (auto& row : out) row.fill({0.0, 0.0});
    // bits of (A, B, C) given kept bits (i, j) and traced bit t
    auto bits = [pair](int i, int j, int t) -> std::array<int, 3> {
        switch (pair) {
            case DetectorPair::AB: return {i, j, t};
            case DetectorPair::BC: return {t, i, j};
            default:               return {i, t, j}; // AC
        }
    };
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    for (int t = 0; t < 2; ++t) {
                        const auto rb = bits(i, j, t);
                        const auto cb = bits(k, l, t);
                        out[2 * i + j][2 * k + l] +=
                            state.rho[kIndex[rb[0]][rb[1]][rb[2]]][kIndex[cb[0]][cb[1]][cb[2]]];
                    }
    return out;
}

AdditivityCheck additivity_check(const TripartiteState& state) {
    AdditivityCheck out;
    out.lhs = l1_coherence(reduce_pair(state, DetectorPair::AB)) +
              l1_coherence(reduce_pair(state, DetectorPair::BC)) +
              l1_coherence(reduce_pair(state, DetectorPair::AC));
    out.rhs = l1_coherence(state.rho);
    out.residual = std::abs(out.lhs - out.rhs);
    return out;
}

namespace state_detail {

std::vector<double> embedded_eigenvalues(const Mat8& m) {
    // Real-symmetric embedding [[Re, -Im], [Im, Re]], cyclic Jacobi.
    constexpr int n = 16;
    double a[n][n];
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            a[i][j] = m[i][j].real();
            a[i][j + 8] = -m[i][j].imag();
            a[i + 8][j] = m[i][j].imag();
            a[i + 8][j + 8] = m[i][j].real();
        }

    double fro = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) fro += a[i][j] * a[i][j];
    fro = std::sqrt(fro);
    const double stop = 1e-15 * std::max(fro, 1e-300);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (std::sqrt(2.0 * off) < stop) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

} // namespace state_detail

double min_eigenvalue(const TripartiteState& state) {
    return state_detail::embedded_eigenvalues(state.rho).front();
}

} // namespace udw
