#pragma once

#include "xxzdm/types.hpp"

namespace xxzdm {

/// Couplings and drive of the two-spin model. All quantities are dimensionless
/// energies (hbar = 1). The driving field has magnitude b >= 0 and direction
/// (sin theta cos phi, sin theta sin phi, cos theta); theta is held in [0, pi]
/// and a reversed field is expressed via theta -> pi - theta, phi -> phi + pi.
struct ModelParams {
  Real j;     // transverse exchange
  Real jz;    // longitudinal exchange
  Real d;     // DM strength along z
  Real b;     // field magnitude, >= 0
  Real theta; // field elevation in radians, in [0, pi]

  ModelParams(Real j, Real jz, Real d, Real b, Real theta);
};

struct FieldVector {
  Real x, y, z;
};

/// b * (sin theta cos phi, sin theta sin phi, cos theta).
FieldVector field_vector(const ModelParams& p, Real phi);

/// 4x4 Hamiltonian over the basis {|11>, |10>, |01>, |00>} with |1> = up.
/// Hermitian by construction and exactly traceless.
Matrix4c build_hamiltonian(const ModelParams& p, Real phi);

/// diag(e^{-i dphi}, 1, 1, e^{+i dphi}). Conjugating H(phi) by this rotation
/// yields H(phi + dphi), so the spectrum is independent of the azimuth.
Matrix4c azimuth_rotation(Real dphi);

} // namespace xxzdm
