#pragma once

#include <optional>

#include "xxzdm/model.hpp"
#include "xxzdm/spectrum.hpp"
#include "xxzdm/types.hpp"

namespace xxzdm {

enum class Gauge {
  paper,         // amplitudes taken verbatim from the closed form
  largest_real,  // global phase fixed so the largest amplitude is real positive
};

/// Unnormalized closed-form amplitudes and their norm u = |(a,b,c,d)|.
struct StateCoeffs {
  Complex a, b, c, d;
  Real u;
};

struct EigenState {
  Vector4c amp;                      // unit norm, over {|11>, |10>, |01>, |00>}
  Real energy;
  std::optional<StateCoeffs> coeffs; // present when built by the closed form
  Gauge gauge;
};

/// Instantaneous eigenstate from the closed form
///   a = b_field sin(theta) e^{-i phi}
///   b = (4 E^2 - jz^2 - B^2 - 2 jz B cos(theta)) / (2 j - 2 d i)
///   c = 2 E - jz - B cos(theta)
///   d = B sin(theta) e^{+i phi} b / (2 E - jz + B cos(theta))
/// normalized by u. Throws NotAnEigenvalue if `energy` is not within 1e-9 of
/// the spectrum, DegenerateFormula if a denominator guard fires (use
/// nullspace_state instead).
EigenState closed_form_state(const ModelParams& p, Real phi, Real energy);

/// Fallback eigenvector: the Jacobi eigenpair nearest to `energy`, gauge
/// fixed. Throws DegenerateLevel when two eigenvalues lie within gap_eps of
/// the request, NotAnEigenvalue when none is within 1e-9.
EigenState nullspace_state(const Matrix4c& m, Real energy);

/// Multiply by a global phase so the largest-magnitude amplitude (ties broken
/// by lowest basis index) is real and positive.
EigenState gauge_fix(EigenState s);

/// <s1|s2>
Complex state_overlap(const EigenState& s1, const EigenState& s2);

} // namespace xxzdm
