#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qgd {

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(cx s) {
    for (auto& v : a_) v *= s;
    return *this;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

cx CMatrix::trace() const {
    cx t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

double CMatrix::hermiticity_defect() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    const int n = a.dim();
    CMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const cx aik = a(i, k);
            if (aik == cx{}) continue;
            for (int j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

CVector matvec(const CMatrix& a, const CVector& v) {
    const int n = a.dim();
    CVector r(n);
    for (int i = 0; i < n; ++i) {
        cx s = 0.0;
        for (int j = 0; j < n; ++j) s += a(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

cx inner(const CVector& a, const CVector& b) {
    cx s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm(const CVector& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

void normalize(CVector& v) {
    const double n = norm(v);
    if (n == 0.0) throw Error(Errc::numerical, "cannot normalize zero vector");
    for (auto& x : v) x /= n;
}

namespace {

double off_diagonal_norm(const CMatrix& a) {
    const int n = a.dim();
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One complex Jacobi rotation zeroing a(p,q), accumulated into v.
void rotate(CMatrix& a, CMatrix& v, int p, int q) {
    const cx apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;

    const cx phase = apq / mag;  // e^{i phi}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (app - aqq) / (2.0 * mag);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const int n = a.dim();
    const cx sp = s * phase;             // s e^{i phi}
    const cx spc = s * std::conj(phase); // s e^{-i phi}

    // columns p, q of A
    for (int i = 0; i < n; ++i) {
        const cx aip = a(i, p);
        const cx aiq = a(i, q);
        a(i, p) = c * aip + spc * aiq;
        a(i, q) = -sp * aip + c * aiq;
    }
    // rows p, q of A
    for (int j = 0; j < n; ++j) {
        const cx apj = a(p, j);
        const cx aqj = a(q, j);
        a(p, j) = c * apj + sp * aqj;
        a(q, j) = -spc * apj + c * aqj;
    }
    // enforce exact structure where it is known analytically
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = cx(a(p, p).real(), 0.0);
    a(q, q) = cx(a(q, q).real(), 0.0);

    // accumulate V <- V R
    for (int i = 0; i < n; ++i) {
        const cx vip = v(i, p);
        const cx viq = v(i, q);
        v(i, p) = c * vip + spc * viq;
        v(i, q) = -sp * vip + c * viq;
    }
}

void fix_phase(CMatrix& v, int col) {
    const int n = v.dim();
    int best = 0;
    double best_mag = -1.0;
    for (int i = 0; i < n; ++i) {
        const double m = std::abs(v(i, col));
        if (m > best_mag) {
            best_mag = m;
            best = i;
        }
    }
    if (best_mag <= 0.0) return;
    const cx u = std::conj(v(best, col)) / best_mag;
    for (int i = 0; i < n; ++i) v(i, col) *= u;
    v(best, col) = cx(std::abs(v(best, col)), 0.0);
}

}  // namespace

EigenSystem eigh(const CMatrix& h) {
    const int n = h.dim();
    if (n < 1) throw Error(Errc::invalid_argument, "eigh: empty matrix");
    const double defect = h.hermiticity_defect();
    if (defect > 1e-12)
        throw Error(Errc::invalid_argument,
                    "eigh: symmetry violation, max |A - A^dagger| entry = " + std::to_string(defect));

    CMatrix a = h;
    CMatrix v = CMatrix::identity(n);
    const double tol = 1e-14 * std::max(1.0, h.frobenius_norm());
    const int max_sweeps = 100;

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= tol) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }
    if (sweep == max_sweeps && off_diagonal_norm(a) > tol)
        throw Error(Errc::numerical, "eigh: Jacobi failed to converge in 100 sweeps");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        const double li = a(i, i).real(), lj = a(j, j).real();
        if (li != lj) return li < lj;
        return i < j;
    });

    EigenSystem out;
    out.eigenvalues.resize(n);
    out.vectors = CMatrix(n);
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
        fix_phase(out.vectors, k);
    }
    return out;
}

SymEigenSystem eigh_sym(const RMatrix& s) {
    const int n = s.rows();
    if (n != s.cols()) throw Error(Errc::invalid_argument, "eigh_sym: matrix not square");
    CMatrix h(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = 0.5 * (s(i, j) + s(j, i));
    const EigenSystem es = eigh(h);
    SymEigenSystem out;
    out.eigenvalues = es.eigenvalues;
    out.vectors = RMatrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.vectors(i, j) = es.vectors(i, j).real();
    return out;
}

CMatrix partial_trace(const CVector& psi, int d_a, int d_b) {
    if (d_a < 1 || d_b < 1 || static_cast<size_t>(d_a) * d_b != psi.size())
        throw Error(Errc::invalid_argument, "partial_trace: length does not factor as dA*dB");
    if (std::abs(norm(psi) - 1.0) > 1e-10)
        throw Error(Errc::invalid_argument, "partial_trace: state is not unit norm");
    CMatrix rho(d_a);
    for (int i = 0; i < d_a; ++i)
        for (int j = 0; j < d_a; ++j) {
            cx s = 0.0;
            for (int b = 0; b < d_b; ++b) s += psi[static_cast<size_t>(i) * d_b + b] * std::conj(psi[static_cast<size_t>(j) * d_b + b]);
            rho(i, j) = s;
        }
    return rho;
}

double purity(const CMatrix& rho) {
    const int n = rho.dim();
    cx t = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t += rho(i, j) * rho(j, i);
    if (std::abs(t.imag()) > 1e-12)
        throw Error(Errc::numerical, "purity: imaginary residue above tolerance");
    return t.real();
}

double operator_norm(const CMatrix& a) {
    const EigenSystem es = eigh(a);
    double m = 0.0;
    for (double l : es.eigenvalues) m = std::max(m, std::abs(l));
    return m;
}

void check_density_matrix(const CMatrix& rho) {
    if (rho.hermiticity_defect() > 1e-12)
        throw Error(Errc::numerical, "density matrix not Hermitian within 1e-12");
    if (std::abs(rho.trace() - cx(1.0, 0.0)) > 1e-10)
        throw Error(Errc::numerical, "density matrix trace deviates from 1");
    const EigenSystem es = eigh(rho);
    if (es.eigenvalues.front() < -1e-10)
        throw Error(Errc::numerical, "density matrix has eigenvalue below -1e-10");
}

std::vector<double> cholesky_solve(const RMatrix& s, const std::vector<double>& b) {
    const int n = s.rows();
    RMatrix l(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = s(i, j);
            for (int k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
            if (i == j) {
                if (sum <= 0.0) throw Error(Errc::numerical, "cholesky_solve: matrix not positive definite");
                l(i, i) = std::sqrt(sum);
            } else {
                l(i, j) = sum / l(j, j);
            }
        }
    }
    std::vector<double> y(n), x(n);
    for (int i = 0; i < n; ++i) {
        double sum = b[i];
        for (int k = 0; k < i; ++k) sum -= l(i, k) * y[k];
        y[i] = sum / l(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double sum = y[i];
        for (int k = i + 1; k < n; ++k) sum -= l(k, i) * x[k];
        x[i] = sum / l(i, i);
    }
    return x;
}

}  // namespace qgd
