#pragma once

#include <vector>

#include "winguide/geometry.hpp"

namespace winguide {

/// Uniform-grid 5-point discretization of the coupled strips, truncated to
/// |x| <= X with a Dirichlet far wall.  The wall segment {|x| > a, y = 0} is
/// Dirichlet; the window gap is left open.  Evenness of the ground state in x
/// is used to halve the domain: x in [0, X] with a reflection (Neumann) row
/// at x = 0.
struct GridSpec {
  double h = 0.0;  // mesh width; d1/h, d2/h, a/h, X/h must all be integers
  double X = 0.0;  // half-length of the computational box, at least 4 d
};

struct FdResult {
  double energy = 0.0;     // Richardson extrapolant over the h and h/2 grids
  double energy_h = 0.0;   // raw grid eigenvalue at step h
  double energy_h2 = 0.0;  // raw grid eigenvalue at step h/2
  double h = 0.0;
  double X = 0.0;
  long unknowns = 0;                // unknown count of the finer grid
  double discrete_threshold = 0.0;  // (4/h^2) sin^2(pi h / (2 d)) at step h
};

/// Solves the five-point scheme at steps h and h/2 and extrapolates.  The
/// window-edge corner singularity limits the raw eigenvalues to O(h)
/// convergence, so the extrapolant is the first-order form 2 E(h/2) - E(h)
/// (itself second order).  Requires a >= 0.2 d: far below that the gap drops
/// under the grid resolution.
[[nodiscard]] FdResult fd_ground_state(const Geometry& g, const GridSpec& spec);

}  // namespace winguide
