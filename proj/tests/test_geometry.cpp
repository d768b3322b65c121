#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "geometry.hpp"
#include "pipeline.hpp"
#include "support/helpers.hpp"

using namespace qgd;
using namespace qgd::test;

namespace {

// ground state of -(cos t Z + sin t X); one-parameter great-circle family
StateField bloch_circle_field() {
    return [](const std::vector<double>& x) {
        const double t = x[0];
        CMatrix h(2);
        h(0, 0) = -std::cos(t);
        h(1, 1) = std::cos(t);
        h(0, 1) = -std::sin(t);
        h(1, 0) = -std::sin(t);
        const EigenSystem es = eigh(h);
        CVector psi = {es.vectors(0, 0), es.vectors(1, 0)};
        return StateSample{psi, es.eigenvalues[1] - es.eigenvalues[0]};
    };
}

OperatorSet stationary_diagonal_ops() {
    OperatorSet ops;
    ops.n = 3;
    ops.p = 2;
    CMatrix a(3);
    a(1, 1) = 1.0;
    a(2, 2) = 2.0;
    ops.operators = {a, a};
    ops.half_sum_sq = matmul(a, a) + matmul(a, a);
    ops.half_sum_sq *= cx(0.5, 0.0);
    return ops;
}

}  // namespace

TEST_CASE("metric of a stationary ground state vanishes") {
    const OperatorSet ops = stationary_diagonal_ops();
    const std::vector<double> x = {0.1, -0.2};
    const MetricTensor fd = metric_fd(ops, x, 1e-5);
    const MetricTensor pt = metric_pt(ops, x);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            CHECK(std::abs(fd.g(a, b)) < 1e-10);
            CHECK(std::abs(pt.g(a, b)) < 1e-14);
        }
}

TEST_CASE("two-level great circle has g = 1/4") {
    const StateField field = bloch_circle_field();
    for (double t : {0.3, 1.1, 2.5}) {
        const MetricTensor g = metric_fd(field, {t}, 1e-5);
        CHECK(g.g(0, 0) == doctest::Approx(0.25).epsilon(1e-6));
    }
}

TEST_CASE("finite-difference and perturbation metrics agree to machine precision") {
    const OperatorSet ops = make_random_operators(8, 8, 42);
    SplitMix64 rng(123);
    double sum_sq = 0.0;
    long count = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> x = random_unit_point(8, rng);
        const MetricTensor fd = metric_fd(ops, x, 1e-5);
        const MetricTensor pt = metric_pt(ops, x);
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b) {
                sum_sq += (fd.g(a, b) - pt.g(a, b)) * (fd.g(a, b) - pt.g(a, b));
                ++count;
            }
        // symmetry and PSD-up-to-noise of both routes
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b) CHECK(fd.g(a, b) == fd.g(b, a));
    }
    CHECK(std::sqrt(sum_sq / count) <= 1e-9);
}

TEST_CASE("metric errors out on a degenerate stencil") {
    OperatorSet ops;
    ops.n = 2;
    ops.p = 1;
    CMatrix eye = CMatrix::identity(2);
    ops.operators = {eye};
    ops.half_sum_sq = matmul(eye, eye);
    ops.half_sum_sq *= cx(0.5, 0.0);
    CHECK_THROWS_AS(metric_fd(ops, {0.5}, 1e-5), Error);
    CHECK_THROWS_AS(metric_pt(ops, {0.5}), Error);
}

TEST_CASE("plaquette phase of a constant field is zero") {
    const CVector psi = random_unit_vector(4, 1);
    CHECK(plaquette_phase(psi, psi, psi, psi) == doctest::Approx(0.0));
}

TEST_CASE("plaquette phase is gauge invariant") {
    const CVector c1 = random_unit_vector(4, 11);
    const CVector c2 = random_unit_vector(4, 12);
    const CVector c3 = random_unit_vector(4, 13);
    const CVector c4 = random_unit_vector(4, 14);
    const double base = plaquette_phase(c1, c2, c3, c4);

    auto rephase = [](CVector v, double angle) {
        const cx u = std::polar(1.0, angle);
        for (auto& e : v) e *= u;
        return v;
    };
    const double re = plaquette_phase(rephase(c1, 0.7), rephase(c2, -1.3), rephase(c3, 2.9),
                                      rephase(c4, 0.01));
    CHECK(std::abs(re - base) < 1e-12);
}

TEST_CASE("plaquette rejects near-orthogonal corners") {
    CVector a = {1.0, 0.0};
    CVector b = {0.0, 1.0};
    CHECK_THROWS_AS(plaquette_phase(a, b, a, b), Error);
}

TEST_CASE("Berry curvature is antisymmetric in its index pair") {
    const OperatorSet ops = make_random_operators(6, 4, 42);
    SplitMix64 rng(7);
    const std::vector<double> x = random_unit_point(4, rng);
    const CurvatureSample ab = berry_plaquette(ops, x, 1e-5, 0, 1);
    const CurvatureSample ba = berry_plaquette(ops, x, 1e-5, 1, 0);
    CHECK(ab.f_ab == -ba.f_ab);
}

TEST_CASE("plaquette value is stable across eps") {
    const OperatorSet ops = make_random_operators(8, 8, 42);
    SplitMix64 rng(9);
    const std::vector<double> x = random_unit_point(8, rng);
    const double f4 = berry_plaquette(ops, x, 1e-4, 0, 1).f_ab;
    const double f5 = berry_plaquette(ops, x, 1e-5, 0, 1).f_ab;
    const double f6 = berry_plaquette(ops, x, 1e-6, 0, 1).f_ab;
    const double scale = std::abs(f5);
    CHECK(std::abs(f4 - f5) <= 0.05 * scale);
    CHECK(std::abs(f6 - f5) <= 0.05 * scale);
}

TEST_CASE("monopole Chern number is -1 on a closed sphere mesh") {
    const double c = chern_sphere(bloch_ground_state, 40, 40);
    CHECK(std::abs(c - (-1.0)) <= 0.01);

    const double reversed = chern_sphere(bloch_ground_state, 40, 40, true);
    CHECK(reversed == -c);
}

TEST_CASE("constant bundle has zero Chern number") {
    const CVector psi = random_unit_vector(3, 5);
    const double c = chern_sphere([&](double, double) { return psi; }, 12, 12);
    CHECK(std::abs(c) < 1e-12);
}

TEST_CASE("open grids are flagged non-topological") {
    std::vector<std::vector<CVector>> grid(3, std::vector<CVector>(3, random_unit_vector(3, 8)));
    const ChernResult open = chern_grid(grid, false, false);
    CHECK_FALSE(open.closed);
    CHECK(std::abs(open.value) < 1e-12);
    const ChernResult closed = chern_grid(grid, true, true);
    CHECK(closed.closed);
}

TEST_CASE("curvature-gap bound holds on random operator points") {
    const OperatorSet ops = make_random_operators(8, 8, 42);
    SplitMix64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const BoundCheck bc = curvature_gap_bound_check(ops, random_unit_point(8, rng), 1e-5, 0, 1);
        CHECK(bc.satisfied);
        CHECK(bc.lhs <= bc.rhs + 1e-8);
    }
}

TEST_CASE("curvature-gap bound is tight but holds on the two-level oracle") {
    // ground state of -(sin t cos p X + sin t sin p Y + cos t Z):
    // |F_tp| = sin(t)/2, gap = 2, |dH_t| = 1, |dH_p| = sin(t)
    const double theta = 2.0, phi = 0.7, eps = 1e-5;
    const StateField field = [](const std::vector<double>& x) {
        return StateSample{bloch_ground_state(x[0], x[1]), 2.0};
    };
    const CurvatureSample s = berry_plaquette(field, {theta, phi}, eps, 0, 1);
    const double lhs = std::abs(s.f_ab);
    const double rhs = 2.0 * 1.0 * std::sin(theta) / 4.0;
    CHECK(lhs == doctest::Approx(std::sin(theta) / 2.0).epsilon(1e-4));
    CHECK(lhs <= rhs + 1e-8);
}

TEST_CASE("stationary field satisfies the bound with zero lhs") {
    const OperatorSet ops = stationary_diagonal_ops();
    const BoundCheck bc = curvature_gap_bound_check(ops, {0.1, -0.2}, 1e-5, 0, 1);
    CHECK(bc.satisfied);
    CHECK(std::abs(bc.lhs) < 1e-8);
}

TEST_CASE("pseudo-determinant on exact cases") {
    RMatrix eye(3, 3);
    for (int i = 0; i < 3; ++i) eye(i, i) = 1.0;
    const PseudoDet a = pseudo_det(eye);
    CHECK(a.value == doctest::Approx(1.0));
    CHECK(a.rank == 3);
    CHECK_FALSE(a.flagged);

    RMatrix d(2, 2);
    d(0, 0) = 2.0;
    const PseudoDet b = pseudo_det(d);
    CHECK(b.value == doctest::Approx(2.0));
    CHECK(b.rank == 1);

    RMatrix zero(2, 2);
    const PseudoDet c = pseudo_det(zero);
    CHECK(c.flagged);
    CHECK(c.rank == 0);
    CHECK(c.value == doctest::Approx(1.0));  // empty product
}

TEST_CASE("pseudo-determinant on a planted low-rank PSD matrix") {
    SplitMix64 rng(41);
    const int p = 6, r = 3;
    RMatrix b(p, r);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < r; ++j) b(i, j) = rng.gaussian();
    RMatrix g(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            double s = 0.0;
            for (int k = 0; k < r; ++k) s += b(i, k) * b(j, k);
            g(i, j) = s;
        }
    const PseudoDet pd = pseudo_det(g);
    CHECK(pd.rank == r);

    const SymEigenSystem es = eigh_sym(g);
    double oracle = 1.0;
    for (double l : es.eigenvalues)
        if (l > 1e-10 * es.eigenvalues.back()) oracle *= l;
    CHECK(pd.value == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("participation ratio") {
    RMatrix eq(4, 4);
    for (int i = 0; i < 4; ++i) eq(i, i) = 2.5;
    CHECK(participation_ratio(eq).value == doctest::Approx(4.0));

    RMatrix one(3, 3);
    one(0, 0) = 7.0;
    CHECK(participation_ratio(one).value == doctest::Approx(1.0));

    RMatrix d(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 1.0;
    d(2, 2) = 0.0001;
    const double s1 = 2.0001, s2 = 2.0 + 1e-8;
    CHECK(participation_ratio(d).value == doctest::Approx(s1 * s1 / s2));

    RMatrix zero(2, 2);
    const ParticipationRatio z = participation_ratio(zero);
    CHECK(z.flagged);
    CHECK(z.value == 0.0);
}

TEST_CASE("spectral gap dimension") {
    RMatrix a(4, 4);
    a(0, 0) = 10.0;
    a(1, 1) = 9.0;
    a(2, 2) = 0.1;
    a(3, 3) = 0.09;
    CHECK(spectral_gap_dimension(a).value() == 2);

    RMatrix g(4, 4);
    for (int i = 0; i < 4; ++i) g(i, i) = std::pow(2.0, -static_cast<double>(i));
    CHECK(spectral_gap_dimension(g).value() == 1);  // equal ratios tie-break to 1

    RMatrix one(3, 3);
    one(0, 0) = 1.0;
    CHECK_FALSE(spectral_gap_dimension(one).has_value());
}

TEST_CASE("spectral gap dimension finds a planted 2-factor structure") {
    // pullback-style PSD matrix with two dominant directions plus noise
    SplitMix64 rng(55);
    const int p = 6;
    RMatrix g(p, p);
    for (int i = 0; i < p; ++i) g(i, i) = 1e-4 * (1.0 + rng.uniform01());
    g(0, 0) += 5.0;
    g(1, 1) += 3.0;
    CHECK(spectral_gap_dimension(g).value() == 2);
}

TEST_CASE("two-operator model matches the closed-form pullback metric") {
    // A = {Z, X}: the ground state of H(x) is the Bloch state along
    // (x2, 0, x1)/r, so g = (I - xx^T/r^2) / (4 r^2) exactly
    OperatorSet ops;
    ops.n = 2;
    ops.p = 2;
    CMatrix z(2), x(2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    ops.operators = {z, x};
    ops.half_sum_sq = matmul(z, z) + matmul(x, x);
    ops.half_sum_sq *= cx(0.5, 0.0);

    SplitMix64 rng(91);
    for (int trial = 0; trial < 12; ++trial) {
        const double r = 0.5 + rng.uniform01();
        const double phi = 6.2831853 * rng.uniform01();
        const std::vector<double> point = {r * std::cos(phi), r * std::sin(phi)};

        RMatrix expected(2, 2);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                expected(a, b) =
                    ((a == b ? 1.0 : 0.0) - point[a] * point[b] / (r * r)) / (4.0 * r * r);

        const MetricTensor pt = metric_pt(ops, point);
        const MetricTensor fd = metric_fd(ops, point, 1e-5);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                CHECK(pt.g(a, b) == doctest::Approx(expected(a, b)).epsilon(1e-9));
                CHECK(fd.g(a, b) == doctest::Approx(expected(a, b)).epsilon(1e-6));
            }

        // the protecting gap of this model is exactly 2r
        const GroundStateRecord rec = ground_state(ops, point);
        CHECK(rec.gap == doctest::Approx(2.0 * r).epsilon(1e-10));
    }
}
