#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "linalg.hpp"
#include "support/helpers.hpp"

using namespace qgd;
using namespace qgd::test;

TEST_CASE("eigh on diag(0, 0.5)") {
    CMatrix h(2);
    h(1, 1) = 0.5;
    const EigenSystem es = eigh(h);
    CHECK(es.eigenvalues[0] == doctest::Approx(0.0));
    CHECK(es.eigenvalues[1] == doctest::Approx(0.5));
    CHECK(std::abs(es.vectors(0, 0) - cx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(es.vectors(1, 0)) < 1e-14);
}

TEST_CASE("eigh on the off-diagonal flip matrix") {
    CMatrix h(2);
    h(0, 1) = 1.0;
    h(1, 0) = 1.0;
    const EigenSystem es = eigh(h);
    CHECK(es.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(es.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(es.eigenvalues[1] - es.eigenvalues[0] == doctest::Approx(2.0));
}

TEST_CASE("eigh reconstruction on a random 8x8 Hermitian, seed 42") {
    const CMatrix h = random_hermitian(8, 42);
    const EigenSystem es = eigh(h);
    CHECK((reconstruct(es) - h).frobenius_norm() <= 1e-12 * std::max(1.0, h.frobenius_norm()));
}

TEST_CASE("eigh orthonormality and reconstruction over 1000 random matrices") {
    for (int n : {2, 4, 6, 8, 16}) {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const CMatrix h = random_hermitian(n, 1000 * n + seed);
            const EigenSystem es = eigh(h);

            for (size_t k = 1; k < es.eigenvalues.size(); ++k)
                CHECK(es.eigenvalues[k - 1] <= es.eigenvalues[k]);

            const CMatrix gram = matmul(es.vectors.adjoint(), es.vectors);
            CHECK(max_abs_diff(gram, CMatrix::identity(n)) < 1e-10);

            const double rel =
                (reconstruct(es) - h).frobenius_norm() / std::max(1.0, h.frobenius_norm());
            CHECK(rel < 1e-10);
        }
    }
}

TEST_CASE("eigh is bitwise deterministic") {
    const CMatrix h = random_hermitian(8, 7);
    const EigenSystem a = eigh(h);
    const EigenSystem b = eigh(h);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.vectors == b.vectors);
}

TEST_CASE("eigh rejects non-Hermitian input") {
    CMatrix h(2);
    h(0, 1) = cx(0.0, 1.0);
    h(1, 0) = cx(0.0, 1.0);  // should be -i
    CHECK_THROWS_WITH_AS(eigh(h), doctest::Contains("symmetry"), Error);
}

TEST_CASE("eigh phase convention: largest entry real positive") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const CMatrix h = random_hermitian(6, 500 + seed);
        const EigenSystem es = eigh(h);
        for (int k = 0; k < 6; ++k) {
            int best = 0;
            double mag = -1.0;
            for (int i = 0; i < 6; ++i)
                if (std::abs(es.vectors(i, k)) > mag) {
                    mag = std::abs(es.vectors(i, k));
                    best = i;
                }
            CHECK(es.vectors(best, k).imag() == 0.0);
            CHECK(es.vectors(best, k).real() > 0.0);
        }
    }
}

TEST_CASE("partial trace of a product state") {
    CVector psi(8, cx{});
    psi[0] = 1.0;  // |0> x |0> in dims (2,4)
    const CMatrix rho = partial_trace(psi, 2, 4);
    CHECK(std::abs(rho(0, 0) - cx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(rho(1, 1)) < 1e-14);
    CHECK(std::abs(rho(0, 1)) < 1e-14);
}

TEST_CASE("partial trace of a maximally entangled state") {
    CVector psi(8, cx{});
    const double r = 1.0 / std::sqrt(2.0);
    psi[0 * 4 + 0] = r;
    psi[1 * 4 + 1] = r;
    const CMatrix rho = partial_trace(psi, 2, 4);
    CHECK(std::abs(rho(0, 0) - cx(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(rho(1, 1) - cx(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(rho(0, 1)) < 1e-14);
}

TEST_CASE("partial trace against the outer-product oracle") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const CVector psi = random_unit_vector(8, 900 + seed);
        const CMatrix rho = partial_trace(psi, 2, 4);
        CHECK(std::abs(rho.trace() - cx(1.0, 0.0)) < 1e-12);

        // oracle: build the full outer product, then trace out B explicitly
        CMatrix oracle(2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                cx s = 0.0;
                for (int b = 0; b < 4; ++b) s += psi[i * 4 + b] * std::conj(psi[j * 4 + b]);
                oracle(i, j) = s;
            }
        CHECK(max_abs_diff(rho, oracle) < 1e-14);
        check_density_matrix(rho);
    }
}

TEST_CASE("partial trace rejects a bad bipartition") {
    CVector psi(6, cx{});
    psi[0] = 1.0;
    CHECK_THROWS_AS(partial_trace(psi, 2, 4), Error);
}

TEST_CASE("purity of pure, mixed, and intermediate states") {
    CMatrix pure(2);
    pure(0, 0) = 1.0;
    CHECK(purity(pure) == doctest::Approx(1.0));

    CMatrix mixed(2);
    mixed(0, 0) = 0.5;
    mixed(1, 1) = 0.5;
    CHECK(purity(mixed) == doctest::Approx(0.5));

    CMatrix inter(2);
    inter(0, 0) = 0.75;
    inter(1, 1) = 0.25;
    CHECK(purity(inter) == doctest::Approx(0.625));
}

TEST_CASE("purity of a reduced pure state stays within [1/dA, 1]") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const CVector psi = random_unit_vector(8, 7000 + seed);
        const double p = purity(partial_trace(psi, 2, 4));
        CHECK(p >= 0.5 - 1e-12);
        CHECK(p <= 1.0 + 1e-12);
    }
}

TEST_CASE("operator norm") {
    CHECK(operator_norm(CMatrix::identity(5)) == doctest::Approx(1.0));

    CMatrix d(2);
    d(0, 0) = -3.0;
    d(1, 1) = 2.0;
    CHECK(operator_norm(d) == doctest::Approx(3.0));

    const CMatrix h = random_hermitian(8, 3);
    const EigenSystem es = eigh(h);
    double expected = 0.0;
    for (double l : es.eigenvalues) expected = std::max(expected, std::abs(l));
    CHECK(std::abs(operator_norm(h) - expected) < 1e-12);
}

TEST_CASE("eigh_sym stays real and matches the complex path") {
    SplitMix64 rng(11);
    RMatrix s(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j) {
            s(i, j) = rng.gaussian();
            s(j, i) = s(i, j);
        }
    const SymEigenSystem es = eigh_sym(s);
    // reconstruction
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            double v = 0.0;
            for (int k = 0; k < 6; ++k) v += es.vectors(i, k) * es.eigenvalues[k] * es.vectors(j, k);
            CHECK(v == doctest::Approx(s(i, j)).epsilon(1e-9));
        }
}

TEST_CASE("cholesky solve round-trips") {
    SplitMix64 rng(5);
    RMatrix a(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) a(i, j) = rng.gaussian();
    RMatrix spd(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            double s = i == j ? 0.1 : 0.0;
            for (int k = 0; k < 5; ++k) s += a(i, k) * a(j, k);
            spd(i, j) = s;
        }
    std::vector<double> b = {1, -2, 3, 0.5, -0.25};
    const std::vector<double> x = cholesky_solve(spd, b);
    for (int i = 0; i < 5; ++i) {
        double s = 0.0;
        for (int j = 0; j < 5; ++j) s += spd(i, j) * x[j];
        CHECK(s == doctest::Approx(b[i]).epsilon(1e-9));
    }
}

TEST_CASE("eigh handles degenerate eigenvalues") {
    // repeated eigenvalue: reconstruction and orthonormality still hold
    CMatrix h(3);
    h(0, 0) = 1.0;
    h(1, 1) = 1.0;
    h(2, 2) = 0.0;
    h(0, 1) = cx(0.0, 0.25);
    h(1, 0) = cx(0.0, -0.25);
    const EigenSystem es = eigh(h);
    CHECK(es.eigenvalues[0] <= es.eigenvalues[1]);
    CHECK(es.eigenvalues[1] <= es.eigenvalues[2]);
    const CMatrix gram = matmul(es.vectors.adjoint(), es.vectors);
    CHECK(max_abs_diff(gram, CMatrix::identity(3)) < 1e-12);
    CHECK((reconstruct(es) - h).frobenius_norm() < 1e-12);

    // exactly proportional to the identity: every eigenvalue equal
    CMatrix eye = CMatrix::identity(4);
    eye *= cx(2.5, 0.0);
    const EigenSystem flat = eigh(eye);
    for (double l : flat.eigenvalues) CHECK(l == doctest::Approx(2.5));
}
