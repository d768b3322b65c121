#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace qgd {

enum class OperatorMethod { random, pca_inspired, pauli };

OperatorMethod operator_method_from_string(const std::string& s);
std::string to_string(OperatorMethod m);

// A fixed set of p Hermitian n x n feature operators. Immutable once built;
// safe to share across threads.
struct OperatorSet {
    int n = 0;
    int p = 0;
    std::vector<CMatrix> operators;
    OperatorMethod method = OperatorMethod::random;
    std::uint64_t seed = 42;
    int seed_offset = 0;

    // 1/2 sum_k A_k^2, cached so the Hamiltonian assembly is O(p n^2)
    CMatrix half_sum_sq;
};

// A_k = (M_k + M_k^dagger)/2 with M_k entries i.i.d. standard complex normal,
// drawn from a deterministic substream keyed by (seed, k + seed_offset).
OperatorSet make_random_operators(int n, int p, std::uint64_t seed = 42, int seed_offset = 0);

// Generalized Gell-Mann basis of traceless Hermitian n x n matrices, in the
// fixed order: symmetric pairs (j<k lexicographic), antisymmetric pairs,
// then diagonal. Basis index is 0-based; count is n^2 - 1.
CMatrix gellmann_element(int n, int index);

// Tensor-product Pauli basis for n = 2^m: words over {I,X,Y,Z} indexed in
// base-4 counting order, skipping the all-identity word.
CMatrix pauli_tensor_element(int n, int index);

// A_k = sqrt(scale_k) * B_k with B_k drawn from one of the two bases above.
// `method` selects the enumeration: pca_inspired -> Gell-Mann, pauli ->
// tensor-product (requires n a power of two).
OperatorSet make_scaled_basis_operators(int n, int p, const std::vector<double>& scales,
                                        OperatorMethod method = OperatorMethod::pca_inspired);

struct GroundStateRecord {
    int t = -1;
    double e0 = 0.0;
    double gap = 0.0;
    CVector state;
    bool degenerate = false;
};

// H(x) = 1/2 sum_k (A_k - x_k I)^2
CMatrix error_hamiltonian(const OperatorSet& ops, const std::vector<double>& x);

// exact derivative dH/dx_a = -(A_a - x_a I)
CMatrix hamiltonian_derivative(const OperatorSet& ops, const std::vector<double>& x, int a);

constexpr double kDegenerateGapTol = 1e-9;

GroundStateRecord ground_state(const OperatorSet& ops, const std::vector<double>& x);

// full spectrum of H(x); used by channels that need excitation energies
EigenSystem ground_spectrum(const OperatorSet& ops, const std::vector<double>& x);

}  // namespace qgd
