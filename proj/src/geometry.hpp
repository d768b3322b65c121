#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "operators.hpp"

namespace qgd {

// Ground state plus its protecting gap at one parameter point. Geometry
// routines accept a field of these so oracle models (e.g. two-level Bloch
// Hamiltonians) can reuse the same code paths as operator sets.
struct StateSample {
    CVector state;
    double gap = 0.0;
};

using StateField = std::function<StateSample(const std::vector<double>&)>;

StateField field_from_operators(const OperatorSet& ops);

struct MetricTensor {
    RMatrix g;              // p x p real symmetric
    std::vector<double> x;  // base point
    std::string method;     // "finite_difference" or "perturbation"
};

// Central-difference pullback metric with gauge-aligned neighbor states.
MetricTensor metric_fd(const StateField& field, const std::vector<double>& x, double eps = 1e-5);
MetricTensor metric_fd(const OperatorSet& ops, const std::vector<double>& x, double eps = 1e-5);

// Sum-over-states metric using the exact Hamiltonian derivative.
MetricTensor metric_pt(const OperatorSet& ops, const std::vector<double>& x);

// -Im log of the Wilson loop product over four corner states. Throws when
// any overlap magnitude drops below 1e-12.
double plaquette_phase(const CVector& c1, const CVector& c2, const CVector& c3, const CVector& c4);

struct CurvatureSample {
    std::vector<double> x;
    int a = 0, b = 1;
    double f_ab = 0.0;
    double gap = 0.0;  // gap at the base corner
};

CurvatureSample berry_plaquette(const StateField& field, const std::vector<double>& x, double eps,
                                int a, int b);
CurvatureSample berry_plaquette(const OperatorSet& ops, const std::vector<double>& x, double eps,
                                int a, int b);

// Curvature integral over a closed latitude-longitude sphere mesh, divided
// by 2pi. `state_at` maps (theta, phi) to a ground state; poles are handled
// with triangular plaquettes. Near-integer for a genuinely closed field.
double chern_sphere(const std::function<CVector(double, double)>& state_at, int n_theta, int n_phi,
                    bool reverse_orientation = false);

struct ChernResult {
    double value = 0.0;
    bool closed = true;  // false -> open mesh, value is not topological
};

// Plaquette-sum flux over a rectangular grid of states divided by 2pi.
// wrap_u / wrap_v close the respective direction.
ChernResult chern_grid(const std::vector<std::vector<CVector>>& states, bool wrap_u, bool wrap_v);

struct BoundCheck {
    bool satisfied = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

// |F_ab| <= 2 |dH_a|_op |dH_b|_op / gap^2, checked via the plaquette value.
BoundCheck curvature_gap_bound_check(const OperatorSet& ops, const std::vector<double>& x,
                                     double eps, int a, int b);

struct PseudoDet {
    double value = 1.0;
    int rank = 0;
    bool flagged = false;  // true when no eigenvalue clears the tolerance
};

// Product of eigenvalues above rank_tol * lambda_max.
PseudoDet pseudo_det(const RMatrix& g, double rank_tol = 1e-10);

struct ParticipationRatio {
    double value = 0.0;
    bool flagged = false;  // zero spectrum
};

// (sum lambda)^2 / sum lambda^2 with negative noise clipped to zero.
ParticipationRatio participation_ratio(const RMatrix& g);

// 1-based index maximizing lambda_i / lambda_{i+1} over the descending
// positive spectrum; ties go to the smallest index. nullopt when fewer
// than two positive eigenvalues exist.
std::optional<int> spectral_gap_dimension(const RMatrix& g);

}  // namespace qgd
