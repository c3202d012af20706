#include "xxzdm/model.hpp"

#include <cmath>

namespace xxzdm {

ModelParams::ModelParams(Real j_, Real jz_, Real d_, Real b_, Real theta_)
    : j(j_), jz(jz_), d(d_), b(b_), theta(theta_)
{
  if (!(std::isfinite(j) && std::isfinite(jz) && std::isfinite(d) && std::isfinite(b) &&
        std::isfinite(theta)))
    throw Error(ErrorKind::PreconditionViolated, "model parameters must be finite");
  if (b < 0)
    throw Error(ErrorKind::PreconditionViolated,
                "b must be >= 0 (reverse the field via theta -> pi - theta, phi -> phi + pi)");
  if (theta < 0 || theta > M_PI)
    throw Error(ErrorKind::PreconditionViolated, "theta must lie in [0, pi]");
}

FieldVector field_vector(const ModelParams& p, Real phi)
{
  const Real st = std::sin(p.theta);
  return {p.b * st * std::cos(phi), p.b * st * std::sin(phi), p.b * std::cos(p.theta)};
}

Matrix4c build_hamiltonian(const ModelParams& p, Real phi)
{
  const Real ct = std::cos(p.theta);
  const Real st = std::sin(p.theta);
  // diagonal halves stored as exact negations so the trace cancels exactly
  const Real diag_11 = (p.jz + p.b * ct) / 2;
  const Real diag_10 = (p.b * ct - p.jz) / 2;
  const Complex exchange(p.j, p.d); // (2j + 2di) / 2
  const Complex field = (p.b * st / 2) * Complex(std::cos(phi), -std::sin(phi));

  Matrix4c h = Matrix4c::Zero();
  h(0, 0) = diag_11;
  h(1, 1) = diag_10;
  h(2, 2) = -diag_11;
  h(3, 3) = -diag_10;
  h(1, 2) = exchange;
  h(2, 1) = std::conj(exchange);
  h(0, 2) = field;
  h(2, 0) = std::conj(field);
  h(1, 3) = field;
  h(3, 1) = std::conj(field);
  return h;
}

Matrix4c azimuth_rotation(Real dphi)
{
  Matrix4c w = Matrix4c::Identity();
  w(0, 0) = Complex(std::cos(dphi), -std::sin(dphi));
  w(3, 3) = Complex(std::cos(dphi), std::sin(dphi));
  return w;
}

} // namespace xxzdm
