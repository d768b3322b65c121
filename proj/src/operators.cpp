#include "operators.hpp"

#include <cmath>

#include "rng.hpp"

namespace qgd {

OperatorMethod operator_method_from_string(const std::string& s) {
    if (s == "random" || s == "rnd") return OperatorMethod::random;
    if (s == "pca_inspired" || s == "pca") return OperatorMethod::pca_inspired;
    if (s == "pauli") return OperatorMethod::pauli;
    throw Error(Errc::invalid_argument, "unknown operator method: " + s);
}

std::string to_string(OperatorMethod m) {
    switch (m) {
        case OperatorMethod::random: return "random";
        case OperatorMethod::pca_inspired: return "pca_inspired";
        case OperatorMethod::pauli: return "pauli";
    }
    return "?";
}

namespace {

void finalize(OperatorSet& ops) {
    ops.half_sum_sq = CMatrix(ops.n);
    for (const auto& a : ops.operators) ops.half_sum_sq += matmul(a, a);
    ops.half_sum_sq *= cx(0.5, 0.0);
}

}  // namespace

OperatorSet make_random_operators(int n, int p, std::uint64_t seed, int seed_offset) {
    if (n < 2 || p < 1) throw Error(Errc::invalid_argument, "make_random_operators: need n >= 2, p >= 1");
    OperatorSet ops;
    ops.n = n;
    ops.p = p;
    ops.method = OperatorMethod::random;
    ops.seed = seed;
    ops.seed_offset = seed_offset;
    ops.operators.reserve(p);
    for (int k = 0; k < p; ++k) {
        SplitMix64 rng(SplitMix64::substream(seed, static_cast<std::uint64_t>(k + seed_offset)));
        CMatrix m(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rng.complex_gaussian();
        CMatrix a(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
        ops.operators.push_back(std::move(a));
    }
    finalize(ops);
    return ops;
}

CMatrix gellmann_element(int n, int index) {
    const int n_pairs = n * (n - 1) / 2;
    if (index < 0 || index >= n * n - 1)
        throw Error(Errc::invalid_argument, "gellmann_element: index out of range");
    CMatrix b(n);
    if (index < n_pairs) {
        // symmetric pair block
        int r = index;
        for (int j = 0; j < n - 1; ++j) {
            const int row_len = n - 1 - j;
            if (r < row_len) {
                const int k = j + 1 + r;
                b(j, k) = 1.0;
                b(k, j) = 1.0;
                return b;
            }
            r -= row_len;
        }
    } else if (index < 2 * n_pairs) {
        int r = index - n_pairs;
        for (int j = 0; j < n - 1; ++j) {
            const int row_len = n - 1 - j;
            if (r < row_len) {
                const int k = j + 1 + r;
                b(j, k) = cx(0.0, -1.0);
                b(k, j) = cx(0.0, 1.0);
                return b;
            }
            r -= row_len;
        }
    } else {
        // diagonal block: h_l = sqrt(2/(l(l+1))) diag(1,...,1,-l,0,...)
        const int l = index - 2 * n_pairs + 1;
        const double scale = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
        for (int i = 0; i < l; ++i) b(i, i) = scale;
        b(l, l) = -scale * l;
        return b;
    }
    throw Error(Errc::invalid_argument, "gellmann_element: enumeration failure");
}

CMatrix pauli_tensor_element(int n, int index) {
    int m = 0;
    while ((1 << m) < n) ++m;
    if ((1 << m) != n)
        throw Error(Errc::invalid_argument, "pauli_tensor_element: n must be a power of two");
    long total = 1;
    for (int i = 0; i < m; ++i) total *= 4;
    if (index < 0 || index >= total - 1)
        throw Error(Errc::invalid_argument, "pauli_tensor_element: index out of range");

    // word digits in base 4, skipping word 0 (all identity)
    long word = index + 1;
    std::vector<int> digits(m);
    for (int i = m - 1; i >= 0; --i) {
        digits[i] = static_cast<int>(word % 4);
        word /= 4;
    }

    auto single = [](int d) {
        CMatrix s(2);
        switch (d) {
            case 0: s(0, 0) = 1.0; s(1, 1) = 1.0; break;                    // I
            case 1: s(0, 1) = 1.0; s(1, 0) = 1.0; break;                    // X
            case 2: s(0, 1) = cx(0.0, -1.0); s(1, 0) = cx(0.0, 1.0); break; // Y
            default: s(0, 0) = 1.0; s(1, 1) = -1.0; break;                  // Z
        }
        return s;
    };

    CMatrix out = single(digits[0]);
    for (int i = 1; i < m; ++i) {
        const CMatrix next = single(digits[i]);
        const int da = out.dim();
        CMatrix kron(da * 2);
        for (int i1 = 0; i1 < da; ++i1)
            for (int j1 = 0; j1 < da; ++j1)
                for (int i2 = 0; i2 < 2; ++i2)
                    for (int j2 = 0; j2 < 2; ++j2)
                        kron(i1 * 2 + i2, j1 * 2 + j2) = out(i1, j1) * next(i2, j2);
        out = std::move(kron);
    }
    return out;
}

OperatorSet make_scaled_basis_operators(int n, int p, const std::vector<double>& scales,
                                        OperatorMethod method) {
    if (n < 2) throw Error(Errc::invalid_argument, "make_scaled_basis_operators: need n >= 2");
    if (static_cast<int>(scales.size()) < p)
        throw Error(Errc::invalid_argument, "make_scaled_basis_operators: fewer scales than operators");
    const bool pauli = (method == OperatorMethod::pauli);
    const long capacity = pauli ? (static_cast<long>(n) * n - 1) : (static_cast<long>(n) * n - 1);
    if (p > capacity)
        throw Error(Errc::invalid_argument,
                    "make_scaled_basis_operators: basis exhausted, max p = " + std::to_string(capacity));
    OperatorSet ops;
    ops.n = n;
    ops.p = p;
    ops.method = pauli ? OperatorMethod::pauli : OperatorMethod::pca_inspired;
    ops.operators.reserve(p);
    for (int k = 0; k < p; ++k) {
        if (scales[k] < 0.0)
            throw Error(Errc::invalid_argument, "make_scaled_basis_operators: negative scale");
        CMatrix b = pauli ? pauli_tensor_element(n, k) : gellmann_element(n, k);
        b *= cx(std::sqrt(scales[k]), 0.0);
        ops.operators.push_back(std::move(b));
    }
    finalize(ops);
    return ops;
}

CMatrix error_hamiltonian(const OperatorSet& ops, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != ops.p)
        throw Error(Errc::invalid_argument, "error_hamiltonian: feature vector length != p");
    // H(x) = 1/2 sum A_k^2 - sum x_k A_k + 1/2 |x|^2 I
    CMatrix h = ops.half_sum_sq;
    double x2 = 0.0;
    for (int k = 0; k < ops.p; ++k) {
        const double xk = x[k];
        x2 += xk * xk;
        if (xk == 0.0) continue;
        const auto& a = ops.operators[k].data();
        auto& hd = h.data();
        for (size_t i = 0; i < hd.size(); ++i) hd[i] -= xk * a[i];
    }
    const cx shift(0.5 * x2, 0.0);
    for (int i = 0; i < ops.n; ++i) h(i, i) += shift;
    return h;
}

CMatrix hamiltonian_derivative(const OperatorSet& ops, const std::vector<double>& x, int a) {
    if (a < 0 || a >= ops.p) throw Error(Errc::invalid_argument, "hamiltonian_derivative: index out of range");
    CMatrix d = ops.operators[a];
    d *= cx(-1.0, 0.0);
    for (int i = 0; i < ops.n; ++i) d(i, i) += x[a];
    return d;
}

GroundStateRecord ground_state(const OperatorSet& ops, const std::vector<double>& x) {
    const EigenSystem es = eigh(error_hamiltonian(ops, x));
    GroundStateRecord rec;
    rec.e0 = es.eigenvalues[0];
    rec.gap = ops.n > 1 ? es.eigenvalues[1] - es.eigenvalues[0] : 0.0;
    rec.state.resize(ops.n);
    for (int i = 0; i < ops.n; ++i) rec.state[i] = es.vectors(i, 0);
    rec.degenerate = rec.gap < kDegenerateGapTol;
    return rec;
}

EigenSystem ground_spectrum(const OperatorSet& ops, const std::vector<double>& x) {
    return eigh(error_hamiltonian(ops, x));
}

}  // namespace qgd
