#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "rng.hpp"

namespace qgd::test {

inline CMatrix random_hermitian(int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    CMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.complex_gaussian();
    CMatrix h(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return h;
}

inline CVector random_unit_vector(int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    CVector v(n);
    for (auto& x : v) x = rng.complex_gaussian();
    normalize(v);
    return v;
}

inline std::vector<double> random_unit_point(int p, SplitMix64& rng) {
    std::vector<double> x(p);
    double n2 = 0.0;
    for (auto& v : x) {
        v = rng.gaussian();
        n2 += v * v;
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& v : x) v *= inv;
    return x;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    double worst = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

inline CMatrix reconstruct(const EigenSystem& es) {
    const int n = es.vectors.dim();
    CMatrix r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cx s = 0.0;
            for (int k = 0; k < n; ++k)
                s += es.vectors(i, k) * es.eigenvalues[k] * std::conj(es.vectors(j, k));
            r(i, j) = s;
        }
    return r;
}

}  // namespace qgd::test
