#pragma once

#include <ostream>

#include "hessianlab/grid.hpp"
#include "hessianlab/report.hpp"

namespace hessianlab {

/// max over the grid of |det(D^2 u) - f| / f for the singular Pogorelov pair,
/// using the closed-form Hessian. Passes at 1e-9. The grid must avoid {z' = 0}.
Report verifyMaIdentity(int n, const GridDomain& grid);

/// Same identity through the difference oracle at steps h and h/2 on the grid
/// points with ||z'|| >= 20 h; reports the observed order of the Hessian error
/// (pass when >= 1.8).
Report verifyMaIdentityDifference(int n, const GridDomain& grid, double h = 0.02, std::size_t maxPoints = 400);

/// det(D^2 phi_R) <= 1e-10 on the grid (phi_R depends on z' only).
Report verifyPhiDegenerate(int n, double R, const GridDomain& grid);

/// u - phi_R <= 1e-12 on the grid and u - phi_R = 0 on sampled points of {z' = 0}.
Report verifyNonstrictMax(int n, double R, const GridDomain& grid, std::size_t singularSamples = 64);

/// Closed form of L_u phi for n = 3:
/// -(70/27 + 50/27 |z_1|^2) ||z'||^2 + 16/27 (1 + R^2) + 8/27 (1 + R^2) |z_1|^2.
double linearizedClosedForm(const Point& z, double R);
/// tr(adj(D^2 u) D^2 phi_R) from the closed-form Hessians (any n >= 3).
double linearizedTrace(const Point& z, double R);
/// Smallest value of 3f - L_u phi over B_R (n = 3), approached as z -> 0.
double linearizedGapBound(double R);

/// L_u phi <= 3 f - epsilon on B_R(0) for n = 3. Compares the closed form with
/// the adjugate trace (1e-8), adds probes approaching the origin along z', and
/// reports epsilon = min(3f - L_u phi). Radii R >= 1/sqrt(2) are expected to fail.
/// When `csv` is set, writes one row per point (re/im coordinates, L_u phi, 3f, gap).
Report verifyLinearizedGap(double R, const GridDomain& grid, std::ostream* csv = nullptr);

}  // namespace hessianlab
