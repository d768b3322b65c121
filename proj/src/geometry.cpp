#include "geometry.hpp"

#include <cmath>

namespace qgd {

namespace {

constexpr double kOverlapFloor = 1e-12;
constexpr double kTwoPi = 6.283185307179586476925286766559;

StateSample solve_point(const StateField& field, const std::vector<double>& x) {
    StateSample s = field(x);
    if (s.gap < kDegenerateGapTol)
        throw Error(Errc::numerical, "degenerate ground state inside stencil");
    return s;
}

// align `v` so its overlap with `ref` is real positive
void gauge_align(CVector& v, const CVector& ref) {
    const cx o = inner(ref, v);
    const double mag = std::abs(o);
    if (mag < kOverlapFloor)
        throw Error(Errc::numerical, "gauge alignment failed: overlap below 1e-12");
    const cx u = std::conj(o) / mag;
    for (auto& e : v) e *= u;
}

}  // namespace

StateField field_from_operators(const OperatorSet& ops) {
    return [ops](const std::vector<double>& x) {
        const GroundStateRecord rec = ground_state(ops, x);
        return StateSample{rec.state, rec.gap};
    };
}

MetricTensor metric_fd(const StateField& field, const std::vector<double>& x, double eps) {
    const int p = static_cast<int>(x.size());
    const StateSample center = solve_point(field, x);
    const int n = static_cast<int>(center.state.size());

    std::vector<CVector> dpsi(p);
    for (int a = 0; a < p; ++a) {
        std::vector<double> xp = x, xm = x;
        xp[a] += eps;
        xm[a] -= eps;
        CVector plus = solve_point(field, xp).state;
        CVector minus = solve_point(field, xm).state;
        gauge_align(plus, center.state);
        gauge_align(minus, center.state);
        CVector d(n);
        for (int i = 0; i < n; ++i) d[i] = (plus[i] - minus[i]) / (2.0 * eps);
        dpsi[a] = std::move(d);
    }

    MetricTensor mt;
    mt.x = x;
    mt.method = "finite_difference";
    mt.g = RMatrix(p, p);
    for (int a = 0; a < p; ++a) {
        const cx conn_a = inner(dpsi[a], center.state);  // <d_a psi | psi>
        for (int b = a; b < p; ++b) {
            const cx t1 = inner(dpsi[a], dpsi[b]);
            const cx t2 = conn_a * inner(center.state, dpsi[b]);
            const double val = (t1 - t2).real();
            mt.g(a, b) = val;
            mt.g(b, a) = val;
        }
    }
    return mt;
}

MetricTensor metric_fd(const OperatorSet& ops, const std::vector<double>& x, double eps) {
    return metric_fd(field_from_operators(ops), x, eps);
}

MetricTensor metric_pt(const OperatorSet& ops, const std::vector<double>& x) {
    const EigenSystem es = ground_spectrum(ops, x);
    const int n = ops.n;
    const int p = ops.p;
    const double gap = es.eigenvalues[1] - es.eigenvalues[0];
    if (gap < kDegenerateGapTol)
        throw Error(Errc::numerical, "metric_pt: degenerate ground state");

    CVector psi0(n);
    for (int i = 0; i < n; ++i) psi0[i] = es.vectors(i, 0);

    // u_a[m] = <psi_m | dH_a | psi_0>, m = 1..n-1
    std::vector<CVector> u(p, CVector(n));
    for (int a = 0; a < p; ++a) {
        const CMatrix dh = hamiltonian_derivative(ops, x, a);
        const CVector w = matvec(dh, psi0);
        for (int m = 1; m < n; ++m) {
            CVector psim(n);
            for (int i = 0; i < n; ++i) psim[i] = es.vectors(i, m);
            u[a][m] = inner(psim, w);
        }
    }

    MetricTensor mt;
    mt.x = x;
    mt.method = "perturbation";
    mt.g = RMatrix(p, p);
    for (int a = 0; a < p; ++a)
        for (int b = a; b < p; ++b) {
            cx s = 0.0;
            for (int m = 1; m < n; ++m) {
                const double de = es.eigenvalues[m] - es.eigenvalues[0];
                s += std::conj(u[a][m]) * u[b][m] / (de * de);
            }
            mt.g(a, b) = s.real();
            mt.g(b, a) = s.real();
        }
    return mt;
}

double plaquette_phase(const CVector& c1, const CVector& c2, const CVector& c3, const CVector& c4) {
    const cx o1 = inner(c1, c2);
    const cx o2 = inner(c2, c3);
    const cx o3 = inner(c3, c4);
    const cx o4 = inner(c4, c1);
    for (const cx& o : {o1, o2, o3, o4})
        if (std::abs(o) < kOverlapFloor)
            throw Error(Errc::numerical, "ill-conditioned Wilson loop: overlap below 1e-12");
    return -std::imag(std::log(o1 * o2 * o3 * o4));
}

CurvatureSample berry_plaquette(const StateField& field, const std::vector<double>& x, double eps,
                                int a, int b) {
    // antisymmetry holds by construction: the reversed pair is the exact
    // negation of the forward loop
    if (a > b) {
        CurvatureSample flipped = berry_plaquette(field, x, eps, b, a);
        std::swap(flipped.a, flipped.b);
        flipped.f_ab = -flipped.f_ab;
        return flipped;
    }
    std::vector<double> xa = x, xab = x, xb = x;
    xa[a] += eps;
    xab[a] += eps;
    xab[b] += eps;
    xb[b] += eps;
    const StateSample s1 = solve_point(field, x);
    const StateSample s2 = solve_point(field, xa);
    const StateSample s3 = solve_point(field, xab);
    const StateSample s4 = solve_point(field, xb);

    CurvatureSample out;
    out.x = x;
    out.a = a;
    out.b = b;
    out.gap = s1.gap;
    out.f_ab = plaquette_phase(s1.state, s2.state, s3.state, s4.state) / (eps * eps);
    return out;
}

CurvatureSample berry_plaquette(const OperatorSet& ops, const std::vector<double>& x, double eps,
                                int a, int b) {
    return berry_plaquette(field_from_operators(ops), x, eps, a, b);
}

double chern_sphere(const std::function<CVector(double, double)>& state_at, int n_theta, int n_phi,
                    bool reverse_orientation) {
    if (n_theta < 2 || n_phi < 3)
        throw Error(Errc::invalid_argument, "chern_sphere: mesh too coarse");
    const double pi = kTwoPi / 2.0;

    // rows 0 and n_theta are the poles; one state each, shared by all phi
    std::vector<std::vector<CVector>> grid(n_theta + 1);
    grid[0] = {state_at(0.0, 0.0)};
    grid[n_theta] = {state_at(pi, 0.0)};
    for (int i = 1; i < n_theta; ++i) {
        grid[i].resize(n_phi);
        const double theta = pi * i / n_theta;
        for (int j = 0; j < n_phi; ++j) grid[i][j] = state_at(theta, kTwoPi * j / n_phi);
    }
    auto at = [&](int i, int j) -> const CVector& {
        if (i == 0) return grid[0][0];
        if (i == n_theta) return grid[n_theta][0];
        return grid[i][j % n_phi];
    };

    double total = 0.0;
    for (int i = 0; i < n_theta; ++i)
        for (int j = 0; j < n_phi; ++j) {
            const CVector& c1 = at(i, j);
            const CVector& c2 = at(i + 1, j);
            const CVector& c3 = at(i + 1, j + 1);
            const CVector& c4 = at(i, j + 1);
            total += plaquette_phase(c1, c2, c3, c4);
        }
    // orientation reversal negates every loop, hence the total, exactly
    return (reverse_orientation ? -total : total) / kTwoPi;
}

ChernResult chern_grid(const std::vector<std::vector<CVector>>& states, bool wrap_u, bool wrap_v) {
    const int nu = static_cast<int>(states.size());
    if (nu < 2) throw Error(Errc::invalid_argument, "chern_grid: need at least 2 rows");
    const int nv = static_cast<int>(states[0].size());
    if (nv < 2) throw Error(Errc::invalid_argument, "chern_grid: need at least 2 columns");

    const int iu_max = wrap_u ? nu : nu - 1;
    const int iv_max = wrap_v ? nv : nv - 1;
    double total = 0.0;
    for (int i = 0; i < iu_max; ++i)
        for (int j = 0; j < iv_max; ++j) {
            const CVector& c1 = states[i][j];
            const CVector& c2 = states[(i + 1) % nu][j];
            const CVector& c3 = states[(i + 1) % nu][(j + 1) % nv];
            const CVector& c4 = states[i][(j + 1) % nv];
            total += plaquette_phase(c1, c2, c3, c4);
        }
    return ChernResult{total / kTwoPi, wrap_u && wrap_v};
}

BoundCheck curvature_gap_bound_check(const OperatorSet& ops, const std::vector<double>& x,
                                     double eps, int a, int b) {
    const CurvatureSample sample = berry_plaquette(ops, x, eps, a, b);
    const double na = operator_norm(hamiltonian_derivative(ops, x, a));
    const double nb = operator_norm(hamiltonian_derivative(ops, x, b));
    BoundCheck out;
    out.lhs = std::abs(sample.f_ab);
    out.rhs = 2.0 * na * nb / (sample.gap * sample.gap);
    out.satisfied = out.lhs <= out.rhs + 1e-8;
    return out;
}

PseudoDet pseudo_det(const RMatrix& g, double rank_tol) {
    const SymEigenSystem es = eigh_sym(g);
    const double lmax = es.eigenvalues.back();
    PseudoDet out;
    if (lmax <= 0.0) {
        out.flagged = true;
        return out;
    }
    const double cut = rank_tol * lmax;
    for (double l : es.eigenvalues) {
        if (l > cut) {
            out.value *= l;
            out.rank += 1;
        }
    }
    if (out.rank == 0) out.flagged = true;
    return out;
}

ParticipationRatio participation_ratio(const RMatrix& g) {
    const SymEigenSystem es = eigh_sym(g);
    double s1 = 0.0, s2 = 0.0;
    for (double l : es.eigenvalues) {
        const double v = std::max(l, 0.0);
        s1 += v;
        s2 += v * v;
    }
    if (s2 == 0.0) return ParticipationRatio{0.0, true};
    return ParticipationRatio{s1 * s1 / s2, false};
}

std::optional<int> spectral_gap_dimension(const RMatrix& g) {
    const SymEigenSystem es = eigh_sym(g);
    std::vector<double> pos;
    for (auto it = es.eigenvalues.rbegin(); it != es.eigenvalues.rend(); ++it)
        if (*it > 0.0) pos.push_back(*it);
    if (pos.size() < 2) return std::nullopt;
    int best = 1;
    double best_ratio = -1.0;
    for (size_t i = 0; i + 1 < pos.size(); ++i) {
        const double r = pos[i] / pos[i + 1];
        if (r > best_ratio) {
            best_ratio = r;
            best = static_cast<int>(i) + 1;
        }
    }
    return best;
}

}  // namespace qgd
