#include "xxzdm/eigenstates.hpp"

#include <cmath>

namespace xxzdm {

EigenState closed_form_state(const ModelParams& p, Real phi, Real energy)
{
  const Spectrum spectrum = eigenvalues(p);
  Real nearest = std::numeric_limits<Real>::infinity();
  for (const Real e : spectrum.energies)
    nearest = std::min(nearest, std::abs(e - energy));
  if (nearest > 1e-9)
    throw Error(ErrorKind::NotAnEigenvalue, "energy is not within 1e-9 of the spectrum");

  const Real ct = std::cos(p.theta);
  const Real bst = p.b * std::sin(p.theta);
  const Complex exch_den(2 * p.j, -2 * p.d); // 2j - 2di
  const Real d_den = 2 * energy - p.jz + p.b * ct;
  if (!(bst > denom_eps) || !(std::abs(exch_den) > denom_eps) || !(std::abs(d_den) > denom_eps))
    throw Error(ErrorKind::DegenerateFormula, "closed-form denominators too small");

  StateCoeffs k;
  k.a = bst * Complex(std::cos(phi), -std::sin(phi));
  k.b = (4 * energy * energy - p.jz * p.jz - p.b * p.b - 2 * p.jz * p.b * ct) / exch_den;
  k.c = 2 * energy - p.jz - p.b * ct;
  k.d = bst * Complex(std::cos(phi), std::sin(phi)) * k.b / d_den;
  k.u = std::sqrt(std::norm(k.a) + std::norm(k.b) + std::norm(k.c) + std::norm(k.d));

  EigenState state;
  state.amp << k.a / k.u, k.b / k.u, k.c / k.u, k.d / k.u;
  state.energy = energy;
  state.coeffs = k;
  state.gauge = Gauge::paper;
  return state;
}

EigenState nullspace_state(const Matrix4c& m, Real energy)
{
  const EigenSystem sys = jacobi_eigensystem(m);
  int nearest = 0;
  for (int i = 1; i < 4; ++i)
    if (std::abs(sys.values[i] - energy) < std::abs(sys.values[nearest] - energy))
      nearest = i;
  if (std::abs(sys.values[nearest] - energy) > 1e-9)
    throw Error(ErrorKind::NotAnEigenvalue, "energy is not within 1e-9 of an eigenvalue");
  int within_gap = 0;
  for (const Real v : sys.values)
    if (std::abs(v - energy) <= gap_eps)
      ++within_gap;
  if (within_gap > 1)
    throw Error(ErrorKind::DegenerateLevel, "no canonical vector for a degenerate eigenvalue");

  EigenState state;
  state.amp = sys.vectors.col(nearest);
  state.energy = sys.values[nearest];
  state.coeffs = std::nullopt;
  state.gauge = Gauge::largest_real;
  return gauge_fix(std::move(state));
}

EigenState gauge_fix(EigenState s)
{
  int largest = 0;
  Real largest_norm = std::norm(s.amp(0));
  for (int i = 1; i < 4; ++i) {
    const Real n = std::norm(s.amp(i));
    if (n > largest_norm) {
      largest = i;
      largest_norm = n;
    }
  }
  const Real mag = std::abs(s.amp(largest));
  if (mag > 0)
    s.amp *= std::conj(s.amp(largest)) / mag;
  return s;
}

Complex state_overlap(const EigenState& s1, const EigenState& s2)
{
  return s1.amp.dot(s2.amp);
}

} // namespace xxzdm
