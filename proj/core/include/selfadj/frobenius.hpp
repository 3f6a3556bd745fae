#pragma once

#include <utility>

#include "selfadj/solution.hpp"

namespace selfadj {

/// The closed-form zero-energy pair (psi1, psi2) of -u'' + (kappa^2-1/4)/r^2 u = 0.
/// kappa and -kappa give the same equation with the pair swapped.
std::pair<ClosedForm, ClosedForm> frobenius_pair(double kappa);

/// psi1 cos(theta) + psi2 sin(theta).
ClosedForm frobenius_boundary_solution(double kappa, double theta);

/// Exact solution of -u'' + (a^2-1/4)/r^2 u = E u with leading term r^(1/2+a):
///   r^(1/2+a) * sum_j c_j r^(2j),  c_0 = 1,  c_j = -E c_{j-1} / (4 j (j + a)).
/// Requires a > -1. The series is summed until it stalls at double precision.
Point frobenius_series(double a, double energy, double r);

/// Second solution at a = 0 with leading term r^(1/2) ln r.
Point frobenius_log_series(double energy, double r);

/// Energy-continued boundary solution: cos(theta) F_{+kappa} + sin(theta) F_{-kappa}
/// (log partner at kappa = 0). Its Wronskian with psi_{kappa,theta} vanishes at r -> 0
/// for every energy, so it realises the boundary condition exactly.
Point frobenius_boundary_series(double kappa, double c1, double c2, double energy, double r);

/// Integral of u^2 over (0, eps) for u = frobenius_boundary_series(kappa, c1, c2, energy, .),
/// by termwise integration of the squared series.
double frobenius_boundary_norm2(double kappa, double c1, double c2, double energy, double eps);

}  // namespace selfadj
