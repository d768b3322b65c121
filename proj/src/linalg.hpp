#pragma once

#include <complex>
#include <vector>

#include "error.hpp"

namespace qgd {

using cx = std::complex<double>;
using CVector = std::vector<cx>;

// Dense complex square matrix, row-major. Dimensions stay small (n <= ~64),
// so everything here favors determinism and robustness over asymptotics.
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}

    static CMatrix identity(int n) {
        CMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return n_; }
    cx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const cx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
    const std::vector<cx>& data() const { return a_; }
    std::vector<cx>& data() { return a_; }

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cx s);
    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, cx s) { return a *= s; }
    friend CMatrix operator*(cx s, CMatrix a) { return a *= s; }

    CMatrix adjoint() const;
    cx trace() const;
    double frobenius_norm() const;

    // max |A[i][j] - conj(A[j][i])|
    double hermiticity_defect() const;

    bool operator==(const CMatrix& o) const { return n_ == o.n_ && a_ == o.a_; }

private:
    int n_ = 0;
    std::vector<cx> a_;
};

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CVector matvec(const CMatrix& a, const CVector& v);

// <a|b> with conjugation on the first argument
cx inner(const CVector& a, const CVector& b);
double norm(const CVector& v);
void normalize(CVector& v);

// Dense real matrix, row-major; used on the statistics/features side.
class RMatrix {
public:
    RMatrix() = default;
    RMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const double& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const std::vector<double>& data() const { return a_; }
    std::vector<double>& data() { return a_; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

struct EigenSystem {
    std::vector<double> eigenvalues;  // ascending
    CMatrix vectors;                  // orthonormal columns, matching order
};

struct SymEigenSystem {
    std::vector<double> eigenvalues;  // ascending
    RMatrix vectors;                  // orthonormal columns
};

// Full spectrum of a Hermitian matrix by cyclic Jacobi rotations.
// Deterministic: identical input bits give identical output bits.
// Eigenvector phases are fixed so the largest-magnitude entry is real
// positive. Rejects inputs whose hermiticity defect exceeds 1e-12.
EigenSystem eigh(const CMatrix& h);

// Real symmetric spectrum via the complex path (stays exactly real).
SymEigenSystem eigh_sym(const RMatrix& s);

// rho_A[i][j] = sum_b psi[i*dB+b] conj(psi[j*dB+b]); psi must be unit norm.
CMatrix partial_trace(const CVector& psi, int d_a, int d_b);

// tr(rho^2) as a real number; the imaginary residue must stay below 1e-12
double purity(const CMatrix& rho);

// max |eigenvalue| of a Hermitian matrix
double operator_norm(const CMatrix& a);

// Density-matrix sanity: Hermitian within 1e-12, unit trace within 1e-10,
// eigenvalues >= -1e-10. Throws on violation.
void check_density_matrix(const CMatrix& rho);

// Solve S x = b for symmetric positive-definite S (in-place Cholesky copy).
std::vector<double> cholesky_solve(const RMatrix& s, const std::vector<double>& b);

}  // namespace qgd
