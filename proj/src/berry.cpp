#include "xxzdm/berry.hpp"

#include <cmath>

#include "xxzdm/eigenstates.hpp"
#include "xxzdm/spectrum.hpp"

namespace xxzdm {

namespace {

constexpr Real theta_point_eps = 1e-12; // theta this close to 0 or pi is a point loop

void check_level(int level)
{
  if (level < 0 || level > 3)
    throw Error(ErrorKind::PreconditionViolated, "level must be in 0..3");
}

// smallest gap between `level` and its sorted neighbours
Real level_gap(const std::array<Real, 4>& energies, int level)
{
  Real gap = std::numeric_limits<Real>::infinity();
  if (level > 0)
    gap = std::min(gap, energies[level] - energies[level - 1]);
  if (level < 3)
    gap = std::min(gap, energies[level + 1] - energies[level]);
  return gap;
}

} // namespace

const char* method_name(BerryMethod method)
{
  switch (method) {
    case BerryMethod::closed: return "closed";
    case BerryMethod::wilson: return "wilson";
    case BerryMethod::adiabatic: return "adiabatic";
  }
  return "unknown";
}

Real principal_phase(Real phase)
{
  Real r = std::remainder(phase, 2 * M_PI);
  if (r <= -M_PI)
    r += 2 * M_PI;
  return r;
}

Real phase_distance(Real p1, Real p2)
{
  return std::abs(std::remainder(p1 - p2, 2 * M_PI));
}

BerryResult berry_closed(const ModelParams& p, int level)
{
  check_level(level);
  const Spectrum spectrum = eigenvalues(p);
  const Real gap = level_gap(spectrum.energies, level);
  if (gap <= gap_eps)
    throw Error(ErrorKind::DegenerateLevel, "Berry phase undefined at a level crossing");

  BerryResult result;
  result.level = level;
  result.method = BerryMethod::closed;
  result.loop_min_gap = gap;
  if (p.theta <= theta_point_eps || M_PI - p.theta <= theta_point_eps) {
    result.phase = 0; // point loop
    return result;
  }
  const EigenState state = closed_form_state(p, 0, spectrum.energies[level]);
  const StateCoeffs& k = *state.coeffs;
  result.phase = 2 * M_PI * (std::norm(k.a) - std::norm(k.d)) / (k.u * k.u);
  return result;
}

namespace {

struct WilsonPass {
  std::array<Complex, 4> products;
  std::array<Real, 4> min_gap;
  std::array<Real, 4> min_overlap;
  std::array<bool, 4> degenerate;
};

WilsonPass wilson_loop_pass(const ModelParams& p, int n)
{
  WilsonPass pass;
  pass.products.fill(Complex(1, 0));
  pass.min_gap.fill(std::numeric_limits<Real>::infinity());
  pass.min_overlap.fill(1);
  pass.degenerate.fill(false);

  Matrix4c first = Matrix4c::Zero();
  Matrix4c prev = Matrix4c::Zero();
  for (int k = 0; k < n; ++k) {
    const Real phi = 2 * M_PI * static_cast<Real>(k) / n;
    const EigenSystem sys = jacobi_eigensystem(build_hamiltonian(p, phi));
    for (int level = 0; level < 4; ++level) {
      const Real gap = level_gap(sys.values, level);
      pass.min_gap[level] = std::min(pass.min_gap[level], gap);
      if (gap <= gap_eps)
        pass.degenerate[level] = true;
    }
    if (k == 0) {
      first = sys.vectors;
    } else {
      for (int level = 0; level < 4; ++level) {
        const Complex overlap = prev.col(level).dot(sys.vectors.col(level));
        pass.products[level] *= overlap;
        pass.min_overlap[level] = std::min(pass.min_overlap[level], std::abs(overlap));
      }
    }
    prev = sys.vectors;
  }
  for (int level = 0; level < 4; ++level) {
    const Complex overlap = prev.col(level).dot(first.col(level));
    pass.products[level] *= overlap;
    pass.min_overlap[level] = std::min(pass.min_overlap[level], std::abs(overlap));
  }
  return pass;
}

BerryResult wilson_result(const WilsonPass& pass, int level, int n)
{
  if (pass.degenerate[level])
    throw Error(ErrorKind::DegenerateLevel, "level degenerate along the loop");
  if (pass.min_overlap[level] < 0.9)
    throw Error(ErrorKind::GridTooCoarse, "loop under-resolved: single-step overlap below 0.9");
  BerryResult result;
  result.level = level;
  result.method = BerryMethod::wilson;
  result.loop_min_gap = pass.min_gap[level];
  result.phase = principal_phase(-std::arg(pass.products[level]));
  result.wilson.grid = n;
  result.wilson.min_step_overlap = pass.min_overlap[level];
  return result;
}

} // namespace

BerryResult berry_wilson(const ModelParams& p, int level, int n)
{
  check_level(level);
  if (n < 16)
    throw Error(ErrorKind::PreconditionViolated, "wilson grid must have n >= 16");
  return wilson_result(wilson_loop_pass(p, n), level, n);
}

std::array<BerryResult, 4> berry_wilson_all(const ModelParams& p, int n)
{
  if (n < 16)
    throw Error(ErrorKind::PreconditionViolated, "wilson grid must have n >= 16");
  const WilsonPass pass = wilson_loop_pass(p, n);
  return {wilson_result(pass, 0, n), wilson_result(pass, 1, n), wilson_result(pass, 2, n),
          wilson_result(pass, 3, n)};
}

BerryResult berry_adiabatic(const ModelParams& p, int level, Real period, long steps)
{
  check_level(level);
  if (!(period > 0) || steps < 1)
    throw Error(ErrorKind::PreconditionViolated, "period and steps must be positive");

  const Spectrum spectrum = eigenvalues(p);
  const Real gap = level_gap(spectrum.energies, level);
  if (gap <= gap_eps)
    throw Error(ErrorKind::DegenerateLevel, "Berry phase undefined at a level crossing");
  const Real max_energy =
      std::max(std::abs(spectrum.energies[0]), std::abs(spectrum.energies[3]));
  const Real h = period / static_cast<Real>(steps);
  if (!(h * max_energy < 0.1))
    throw Error(ErrorKind::StepGuard, "integrator step too large for max|E|");

  const Vector4c psi0 = nullspace_state(build_hamiltonian(p, 0), spectrum.energies[level]).amp;

  const auto ham_at = [&p, period](Real t) {
    return build_hamiltonian(p, 2 * M_PI * t / period);
  };
  // energy expectation of an (approximately) normalized stage state
  const auto energy_of = [](const Vector4c& psi, const Vector4c& h_psi) {
    return std::real(psi.dot(h_psi)) / psi.squaredNorm();
  };

  Vector4c psi = psi0;
  Real dynamical = 0;
  const Complex minus_i(0, -1);
  for (long step = 0; step < steps; ++step) {
    const Real t = h * static_cast<Real>(step);
    const Matrix4c h1 = ham_at(t);
    const Matrix4c h2 = ham_at(t + h / 2);
    const Matrix4c h3 = ham_at(t + h);

    const Vector4c h1psi = h1 * psi;
    const Vector4c k1 = minus_i * h1psi;
    const Vector4c p2 = psi + (h / 2) * k1;
    const Vector4c h2p2 = h2 * p2;
    const Vector4c k2 = minus_i * h2p2;
    const Vector4c p3 = psi + (h / 2) * k2;
    const Vector4c h2p3 = h2 * p3;
    const Vector4c k3 = minus_i * h2p3;
    const Vector4c p4 = psi + h * k3;
    const Vector4c h3p4 = h3 * p4;
    const Vector4c k4 = minus_i * h3p4;

    const Real e1 = energy_of(psi, h1psi);
    const Real e2 = energy_of(p2, h2p2);
    const Real e3 = energy_of(p3, h2p3);
    const Real e4 = energy_of(p4, h3p4);
    dynamical += -(h / 6) * (e1 + 2 * e2 + 2 * e3 + e4);

    psi += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    psi /= psi.norm();
  }

  const Complex closure = psi0.dot(psi);
  BerryResult result;
  result.level = level;
  result.method = BerryMethod::adiabatic;
  result.loop_min_gap = gap;
  result.adiabatic.period = period;
  result.adiabatic.steps = steps;
  result.adiabatic.total_phase = std::arg(closure);
  result.adiabatic.dynamical_phase = dynamical;
  result.adiabatic.final_overlap = std::abs(closure);
  result.adiabatic.adiabatic_warning = result.adiabatic.final_overlap < 0.99;
  result.phase = principal_phase(result.adiabatic.total_phase - dynamical);
  return result;
}

} // namespace xxzdm
