#pragma once

#include <array>

#include "xxzdm/model.hpp"
#include "xxzdm/types.hpp"

namespace xxzdm {

enum class BerryMethod { closed, wilson, adiabatic };

const char* method_name(BerryMethod method);

struct WilsonDetail {
  int grid = 0;
  Real min_step_overlap = 1; // smallest |<psi_k|psi_{k+1}>| along the loop
};

struct AdiabaticDetail {
  Real period = 0;
  long steps = 0;
  Real total_phase = 0;     // arg <psi(0)|psi(T)>
  Real dynamical_phase = 0; // -integral of <psi|H|psi> dt
  Real final_overlap = 1;   // |<psi(0)|psi(T)>|
  bool adiabatic_warning = false;
};

struct BerryResult {
  int level = 0;          // ascending-energy label, 0..3
  Real phase = 0;         // radians
  BerryMethod method = BerryMethod::closed;
  Real loop_min_gap = 0;  // smallest adjacent gap of the level along the loop
  WilsonDetail wilson;    // populated for the wilson method
  AdiabaticDetail adiabatic; // populated for the adiabatic method
};

/// Wrap into (-pi, pi].
Real principal_phase(Real phase);

/// Circular distance min_k |p1 - p2 + 2 pi k|, in [0, pi].
Real phase_distance(Real p1, Real p2);

/// Closed-form Berry phase 2 pi (|a|^2 - |d|^2) / u^2, in [-2 pi, 2 pi].
/// Returns 0 by convention at theta in {0, pi} (the loop is a point). Throws
/// DegenerateLevel if the level's adjacent gap is below gap_eps and
/// DegenerateFormula where the closed form does not apply (b sin(theta) ~ 0).
BerryResult berry_closed(const ModelParams& p, int level);

/// Gauge-invariant discrete loop phase -arg prod_k <psi(phi_k)|psi(phi_k+1)>
/// over phi_k = 2 pi k / n, closed with the k = 0 state; principal value.
/// n >= 16. Throws DegenerateLevel if any grid point has the level's adjacent
/// gap below gap_eps, GridTooCoarse if a single-step overlap drops below 0.9.
BerryResult berry_wilson(const ModelParams& p, int level, int n);

/// All four levels from one pass over the loop grid (same contract per level).
std::array<BerryResult, 4> berry_wilson_all(const ModelParams& p, int n);

/// Adiabatic oracle: integrates i d|psi>/dt = H(phi(t)) |psi> with
/// phi = 2 pi t / period by classical RK4 with per-step renormalization,
/// accumulating the dynamical phase alongside; geometric phase is the
/// principal value of (total - dynamical). Requires period / steps * max|E|
/// < 0.1 (StepGuard); sets adiabatic_warning if |<psi(T)|psi(0)>| < 0.99.
BerryResult berry_adiabatic(const ModelParams& p, int level, Real period, long steps);

} // namespace xxzdm
