#include "xxzdm/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "xxzdm/jacobi.hpp"
#include "xxzdm/quartic.hpp"

namespace xxzdm {

SecularCoeffs secular_coefficients(const ModelParams& p)
{
  const Real j2 = p.j * p.j;
  const Real jz2 = p.jz * p.jz;
  const Real d2 = p.d * p.d;
  const Real b2 = p.b * p.b;
  const Real ct = std::cos(p.theta);
  return {
      -8 * (2 * j2 + jz2 + 2 * d2 + b2),
      16 * p.jz * (j2 + d2),
      (b2 + jz2) * (b2 + jz2) - 4 * d2 * jz2 - 4 * j2 * jz2 + 4 * b2 * ct * ct * (j2 + d2 - jz2),
  };
}

std::array<Real, 4> solve_secular(const SecularCoeffs& coeffs)
{
  if (!(std::isfinite(coeffs.s) && std::isfinite(coeffs.l) && std::isfinite(coeffs.c)))
    throw Error(ErrorKind::PreconditionViolated, "secular coefficients must be finite");

  const auto roots = solve_depressed_quartic<Real>(coeffs.s / 16, coeffs.l / 16, coeffs.c / 16);

  const Real tol =
      1e-12 * std::max({Real(1), std::abs(coeffs.s), std::abs(coeffs.l), std::abs(coeffs.c)});
  for (const Real e : roots) {
    const Real e2 = e * e;
    const Real residual = 16 * e2 * e2 + coeffs.s * e2 + coeffs.l * e + coeffs.c;
    if (!(std::abs(residual) <= tol))
      throw Error(ErrorKind::NumericalFailure, "secular root residual above tolerance");
  }
  return roots;
}

Spectrum make_spectrum(std::array<Real, 4> sorted_energies)
{
  std::sort(sorted_energies.begin(), sorted_energies.end());
  Spectrum s{sorted_energies, 0, {}};
  s.min_gap = std::numeric_limits<Real>::infinity();
  for (int i = 0; i < 3; ++i) {
    const Real gap = sorted_energies[i + 1] - sorted_energies[i];
    s.min_gap = std::min(s.min_gap, gap);
    s.degenerate[i] = gap <= gap_eps;
  }
  return s;
}

Spectrum eigenvalues(const ModelParams& p)
{
  const SecularCoeffs coeffs = secular_coefficients(p);
  try {
    return make_spectrum(solve_secular(coeffs));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NumericalFailure)
      throw;
    // retry with the dense oracle before surfacing the failure
    return make_spectrum(jacobi_eigensystem(build_hamiltonian(p, 0)).values);
  }
}

EigenSystem jacobi_eigensystem(const Matrix4c& m)
{
  Real max_abs = 0;
  Real max_asym = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      max_abs = std::max(max_abs, std::abs(m(i, j)));
      max_asym = std::max(max_asym, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  if (max_asym > 1e-12 * std::max(Real(1), max_abs))
    throw Error(ErrorKind::NotHermitian, "matrix is not Hermitian");

  const auto res = hermitian_jacobi<Real, 4>(m, 100);
  EigenSystem sys;
  for (int i = 0; i < 4; ++i)
    sys.values[i] = res.values(i);
  sys.vectors = res.vectors;
  return sys;
}

std::array<Real, 4> zero_field_eigenvalues(const ModelParams& p)
{
  if (p.b != 0)
    throw Error(ErrorKind::PreconditionViolated, "zero_field_eigenvalues requires b = 0");
  const Real root = std::sqrt(p.j * p.j + p.d * p.d);
  const Real half_jz = p.jz / 2;
  return {-half_jz - root, -half_jz + root, half_jz, half_jz};
}

std::optional<Real> critical_dm(Real j, Real jz)
{
  if (!(std::isfinite(j) && std::isfinite(jz)))
    throw Error(ErrorKind::PreconditionViolated, "critical_dm requires finite couplings");
  const Real delta = jz * jz - j * j;
  if (delta < 0)
    return std::nullopt;
  return std::sqrt(delta);
}

} // namespace xxzdm
