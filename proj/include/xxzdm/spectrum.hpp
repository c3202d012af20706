#pragma once

#include <array>
#include <optional>

#include "xxzdm/model.hpp"
#include "xxzdm/types.hpp"

namespace xxzdm {

/// Coefficients of the secular quartic 16 E^4 + s E^2 + l E + c = 0.
/// s = -8 (2 j^2 + jz^2 + 2 d^2 + b^2) is nonpositive for every parameter set.
struct SecularCoeffs {
  Real s, l, c;
};

SecularCoeffs secular_coefficients(const ModelParams& p);

/// The four real roots of the secular quartic, ascending. Each root satisfies
/// |16 E^4 + s E^2 + l E + c| <= 1e-12 * max(1, |s|, |l|, |c|); throws
/// NumericalFailure otherwise.
std::array<Real, 4> solve_secular(const SecularCoeffs& coeffs);

struct Spectrum {
  std::array<Real, 4> energies;    // ascending
  Real min_gap;                    // smallest adjacent difference
  std::array<bool, 3> degenerate;  // adjacent pairs closer than gap_eps
};

Spectrum make_spectrum(std::array<Real, 4> sorted_energies);

/// Spectrum of the model via the secular quartic; independent of the azimuth.
/// Falls back to jacobi_eigensystem at phi = 0 if root polishing fails.
Spectrum eigenvalues(const ModelParams& p);

struct EigenSystem {
  std::array<Real, 4> values; // ascending
  Matrix4c vectors;           // orthonormal columns, paired with values
};

/// Independent dense oracle: cyclic complex Jacobi rotations. Requires a
/// Hermitian input (NotHermitian otherwise).
EigenSystem jacobi_eigensystem(const Matrix4c& m);

/// Closed-form eigenvalues at zero field, in the order
/// {-jz/2 - R, -jz/2 + R, jz/2, jz/2} with R = sqrt(j^2 + d^2).
std::array<Real, 4> zero_field_eigenvalues(const ModelParams& p);

/// DM strength sqrt(jz^2 - j^2) at which the upper three zero-field levels
/// coincide; absent when jz^2 < j^2.
std::optional<Real> critical_dm(Real j, Real jz);

} // namespace xxzdm
