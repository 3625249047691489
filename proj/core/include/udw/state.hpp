#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include "udw/closed_form.hpp"

namespace udw {

// Leading-order joint state of the three detectors in the ordered basis
//   {|000>, |001>, |010>, |100>, |011>, |101>, |110>, |111>}
// with bits (A, B, C). Only the entries fed by P, C, X (and conjugates)
// are nonzero; the (0,0) entry is defined as 1 - (P_A + P_B + P_C) so the
// trace is exactly one at this order.

using Mat8 = std::array<std::array<std::complex<double>, 8>, 8>;
using Mat4 = std::array<std::array<std::complex<double>, 4>, 4>;

enum class DetectorPair { AB = 0, BC = 1, AC = 2 };

struct TripartiteState {
    Mat8 rho{};
    Probabilities probs{};
    std::array<PairAmplitudes, 3> pairs{}; // indexed by DetectorPair
};

struct AdditivityCheck {
    double lhs{0.0};      // sum of pair-reduction coherences
    double rhs{0.0};      // tripartite coherence
    double residual{0.0}; // |lhs - rhs|
};

// Thrown when P_A + P_B + P_C >= 1 (the perturbative construction is no
// longer meaningful; reduce lambda or enlarge the gaps).
struct regime_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Index of the basis ket with excitation bits (a, b, c).
int basis_index(int a, int b, int c);

TripartiteState assemble_state(const Probabilities& probs,
                               const std::array<PairAmplitudes, 3>& pairs);

// Partial trace over the detector excluded from `pair`; basis {|00>, |01>,
// |10>, |11>} of the kept detectors in label order.
Mat4 reduce_pair(const TripartiteState& state, DetectorPair pair);

// Sum of the magnitudes of all off-diagonal entries.
template <std::size_t N>
double l1_coherence(const std::array<std::array<std::complex<double>, N>, N>& m) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            if (i != j) s += std::abs(m[i][j]);
    return static_cast<double>(s);
}

AdditivityCheck additivity_check(const TripartiteState& state);

// Diagnostic only: the truncated state may have small negative eigenvalues
// of higher order in the coupling.
double min_eigenvalue(const TripartiteState& state);

namespace state_detail {
// Eigenvalues of a Hermitian 8x8 matrix via its real-symmetric embedding
// (each eigenvalue appears twice); returned sorted ascending, size 16.
std::vector<double> embedded_eigenvalues(const Mat8& m);
} // namespace state_detail

} // namespace udw
