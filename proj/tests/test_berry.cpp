#include <doctest.h>

#include <cmath>
#include <random>

#include "xxzdm/berry.hpp"
#include "xxzdm/eigenstates.hpp"
#include "xxzdm/spectrum.hpp"

using namespace xxzdm;

namespace {

const ModelParams generic{1, 1.1, 0.5, 1, M_PI / 4};

} // namespace

TEST_CASE("phase_distance pinned values")
{
  CHECK(phase_distance(0, 2 * M_PI) <= 1e-15);
  CHECK(phase_distance(M_PI / 2, -M_PI / 2) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(phase_distance(1.9 * M_PI, -1.9 * M_PI) == doctest::Approx(0.2 * M_PI).epsilon(1e-12));
}

TEST_CASE("principal_phase wraps into (-pi, pi]")
{
  CHECK(principal_phase(3 * M_PI) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(principal_phase(-M_PI) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(principal_phase(0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(principal_phase(-7) == doctest::Approx(-7 + 2 * M_PI).epsilon(1e-14));
}

TEST_CASE("closed-form phase vanishes on the equator")
{
  const ModelParams equator{1, 1.1, 0.5, 1, M_PI / 2};
  for (int level = 0; level < 4; ++level) {
    const BerryResult r = berry_closed(equator, level);
    CHECK(std::abs(r.phase) <= 1e-8);
    CHECK(r.loop_min_gap > gap_eps);
  }
}

TEST_CASE("Wilson loop vanishes on the equator")
{
  const auto results = berry_wilson_all({1, 1.1, 0.5, 1, M_PI / 2}, 1024);
  for (const BerryResult& r : results)
    CHECK(std::abs(r.phase) <= 1e-6);
}

TEST_CASE("polar field gives a point loop and zero phase")
{
  const BerryResult r = berry_closed({1, 1.1, 0.5, 1, 0}, 0);
  CHECK(r.phase == 0);
  const BerryResult antipodal = berry_closed({1, 1.1, 0.5, 1, M_PI}, 2);
  CHECK(antipodal.phase == 0);
}

TEST_CASE("closed form matches the Wilson loop")
{
  for (int level = 0; level < 4; ++level) {
    const BerryResult closed = berry_closed(generic, level);
    const BerryResult wilson = berry_wilson(generic, level, 1024);
    CHECK(phase_distance(closed.phase, wilson.phase) <= 1e-5 * 2 * M_PI);
    CHECK(wilson.wilson.grid == 1024);
    CHECK(wilson.wilson.min_step_overlap > 0.9);
  }
}

TEST_CASE("closed form and Wilson loop agree in sign, not only modulus")
{
  for (int level = 0; level < 4; ++level) {
    const BerryResult closed = berry_closed(generic, level);
    const BerryResult wilson = berry_wilson(generic, level, 1024);
    const Real closed_principal = principal_phase(closed.phase);
    if (std::abs(closed_principal) > 1e-3)
      CHECK(closed_principal * wilson.phase > 0);
  }
}

TEST_CASE("Wilson loop converges at second order")
{
  const int level = 1;
  const Real d64 = phase_distance(berry_wilson(generic, level, 64).phase,
                                  berry_wilson(generic, level, 128).phase);
  const Real d128 = phase_distance(berry_wilson(generic, level, 128).phase,
                                   berry_wilson(generic, level, 256).phase);
  const Real d256 = phase_distance(berry_wilson(generic, level, 256).phase,
                                   berry_wilson(generic, level, 512).phase);
  CHECK(d128 <= d64 / 2);
  CHECK(d256 <= d128 / 2);
}

TEST_CASE("Wilson loop is gauge invariant")
{
  const int n = 256;
  const Spectrum spec = eigenvalues(generic);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<Real> angle(0, 2 * M_PI);
  for (int level = 0; level < 4; ++level) {
    const BerryResult reference = berry_wilson(generic, level, n);
    // rebuild the overlap chain from independently re-phased loop states
    std::vector<Vector4c> states;
    states.reserve(n);
    for (int k = 0; k < n; ++k) {
      const Real phi = 2 * M_PI * k / n;
      Vector4c amp =
          nullspace_state(build_hamiltonian(generic, phi), spec.energies[level]).amp;
      amp *= std::polar(1.0, angle(rng));
      states.push_back(amp);
    }
    Complex product(1, 0);
    for (int k = 0; k < n; ++k)
      product *= states[k].dot(states[(k + 1) % n]);
    const Real rephased = principal_phase(-std::arg(product));
    CHECK(phase_distance(rephased, reference.phase) <= 1e-12);
  }
}

TEST_CASE("degenerate levels are refused by every method")
{
  const ModelParams degenerate{1, 1, 0, 0, M_PI / 4};
  for (int level : {1, 2}) {
    CHECK_THROWS_AS(berry_closed(degenerate, level), Error);
    CHECK_THROWS_AS(berry_wilson(degenerate, level, 64), Error);
    CHECK_THROWS_AS(berry_adiabatic(degenerate, level, 100, 10000), Error);
  }
  try {
    berry_closed(degenerate, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateLevel);
  }
}

TEST_CASE("method guards")
{
  CHECK_THROWS_AS(berry_wilson(generic, 0, 8), Error);
  CHECK_THROWS_AS(berry_closed(generic, 5), Error);
  try {
    berry_adiabatic(generic, 0, 2000, 100);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StepGuard);
  }
}

TEST_CASE("adiabatic evolution of a stationary Hamiltonian is purely dynamical")
{
  const BerryResult r = berry_adiabatic({1, 1.1, 0.5, 1, 0}, 0, 50, 20000);
  CHECK(std::abs(r.phase) <= 1e-6);
  CHECK(r.adiabatic.final_overlap > 0.999);
  CHECK_FALSE(r.adiabatic.adiabatic_warning);
}

TEST_CASE("adiabatic phase approaches the closed form as the period grows")
{
  const BerryResult closed = berry_closed(generic, 0);
  const BerryResult slow = berry_adiabatic(generic, 0, 1000, 200000);
  const BerryResult fast = berry_adiabatic(generic, 0, 500, 100000);
  const Real err_slow = phase_distance(slow.phase, closed.phase);
  const Real err_fast = phase_distance(fast.phase, closed.phase);
  CHECK(err_slow < err_fast);
  CHECK(err_slow <= 0.05);
  CHECK(slow.adiabatic.final_overlap > 0.99);
  CHECK(std::abs(slow.adiabatic.total_phase) <= M_PI);
}

TEST_CASE("closed-form phase is odd about the equator")
{
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<Real> dm(0, 1);
  std::uniform_real_distribution<Real> field(0.1, 2);
  std::uniform_real_distribution<Real> angle(0.1, M_PI / 2 - 0.05);
  for (int trial = 0; trial < 40; ++trial) {
    const Real d = dm(rng);
    const Real b = field(rng);
    const Real theta = angle(rng);
    for (int level = 0; level < 4; ++level) {
      const BerryResult upper = berry_closed({1, 1.1, d, b, theta}, level);
      const BerryResult lower = berry_closed({1, 1.1, d, b, M_PI - theta}, level);
      CHECK(phase_distance(upper.phase, -lower.phase) <= 1e-8);
      CHECK(std::abs(upper.phase + lower.phase) <= 1e-8); // raw, not only mod 2 pi
    }
  }
}

TEST_CASE("closed-form phase stays within [-2 pi, 2 pi]")
{
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<Real> coupling(-3, 3);
  std::uniform_real_distribution<Real> field(0.05, 3);
  std::uniform_real_distribution<Real> angle(0.05, M_PI - 0.05);
  for (int trial = 0; trial < 200; ++trial) {
    const ModelParams p{coupling(rng), coupling(rng), coupling(rng), field(rng), angle(rng)};
    for (int level = 0; level < 4; ++level) {
      try {
        const BerryResult r = berry_closed(p, level);
        CHECK(std::abs(r.phase) <= 2 * M_PI + 1e-12);
      } catch (const Error&) {
        // degenerate or formula-guarded draws are exercised elsewhere
      }
    }
  }
}
