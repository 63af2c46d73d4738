#pragma once

#include <optional>
#include <vector>

#include "vlab/grid.hpp"

namespace vlab {

/// Result of a damped-iteration Poisson solve.
struct PoissonResult {
    ScalarField2D solution;
    double residual = 0.0;   // max-norm of (L phi - rhs), relative to max|rhs|
    int sweeps = 0;
    bool converged = false;  // residual <= accept_tol
};

/// Options for the SOR solver. Layout convention: walls on axis 1, periodic
/// axis 2 (first and last axis-2 nodes coincide).
struct PoissonOptions {
    double target_tol = 1e-10;  // iterate until this relative residual if possible
    double accept_tol = 1e-8;   // reject above this (documented solver contract)
    int sweeps_per_node_cap = 90;  // iteration cap = cap * max(n1, n2)
    double omega = 0.0;            // 0 = auto from grid size
};

/// Solves  L phi = rhs  with the compact 5-point operator
///   (1/w) d1(w d1 phi) + d2^2 phi,
/// where w is an optional strictly positive axis-1 weight (w = r for the
/// meridian-plane operator), walls at the first/last axis-1 rows and periodic
/// axis 2. Wall condition is either homogeneous Neumann (flux-free half-cell
/// rows; the compatible projector for no-penetration walls) or Dirichlet with
/// given wall values. The Neumann problem is singular: the right-hand side is
/// shifted by its volume-weighted mean and the solution anchored to mean zero.
PoissonResult solve_poisson_wall1_periodic2(
    const ScalarField2D& rhs,
    bool dirichlet,
    const std::vector<double>& wall_lo,   // Dirichlet values at i=0 (per j), empty for Neumann
    const std::vector<double>& wall_hi,   // Dirichlet values at i=n1-1
    const std::vector<double>& weight1,   // per-i weight, empty for 1
    const PoissonOptions& opt = {},
    const ScalarField2D* warm_start = nullptr);

}  // namespace vlab
