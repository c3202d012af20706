#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace xxzdm {

namespace detail {

// error-free transformations
template <typename Scalar>
void two_sum(Scalar a, Scalar b, Scalar& sum, Scalar& err)
{
  sum = a + b;
  const Scalar shift = sum - a;
  err = (a - (sum - shift)) + (b - shift);
}

template <typename Scalar>
void two_prod(Scalar a, Scalar b, Scalar& prod, Scalar& err)
{
  prod = a * b;
  err = std::fma(a, b, -prod);
}

} // namespace detail

/// Depressed quartic x^4 + p x^2 + q x + r with real coefficients.
template <typename Scalar>
struct DepressedQuartic {
  Scalar p, q, r;

  Scalar value(Scalar x) const { return ((x * x + p) * x + q) * x + r; }
  Scalar deriv(Scalar x) const { return (Scalar(4) * x * x + Scalar(2) * p) * x + q; }
  Scalar deriv2(Scalar x) const { return Scalar(12) * x * x + Scalar(2) * p; }

  /// Compensated Horner: value(x) evaluated with round-off pushed to
  /// O(eps^2), so the returned value reflects the stored coefficients
  /// faithfully (the coefficients' own rounding remains, and sets the
  /// certainty floor for near-multiple roots).
  Scalar value_compensated(Scalar x) const {
    const Scalar coeffs[4] = {Scalar(0), p, q, r};
    Scalar acc = Scalar(1);
    Scalar comp = Scalar(0);
    for (const Scalar coeff : coeffs) {
      Scalar prod, prod_err, sum, sum_err;
      detail::two_prod(acc, x, prod, prod_err);
      detail::two_sum(prod, coeff, sum, sum_err);
      comp = comp * x + (prod_err + sum_err);
      acc = sum;
    }
    return acc + comp;
  }

  // Round-off level of value(x): everything below this is numerically zero.
  Scalar value_floor(Scalar x) const {
    const Scalar ax = std::abs(x);
    const Scalar ax2 = ax * ax;
    return Scalar(8) * std::numeric_limits<Scalar>::epsilon() *
           (ax2 * ax2 + std::abs(p) * ax2 + std::abs(q) * ax + std::abs(r));
  }
  Scalar deriv_floor(Scalar x) const {
    const Scalar ax = std::abs(x);
    return Scalar(8) * std::numeric_limits<Scalar>::epsilon() *
           (Scalar(4) * ax * ax * ax + Scalar(2) * std::abs(p) * ax + std::abs(q));
  }
  // attainable accuracy of a Newton-polished simple root near x
  Scalar root_uncertainty(Scalar x) const {
    return value_floor(x) / std::max(std::abs(deriv(x)), deriv_floor(x));
  }
  // largest |value| a reported root may carry (matches the secular contract,
  // which is stated for the 16-scaled coefficients)
  Scalar residual_budget() const {
    return Scalar(1e-12) * std::max({Scalar(1) / 16, std::abs(p), std::abs(q), std::abs(r)});
  }
};

namespace detail {

/// Largest real root of the monic cubic y^3 + a2 y^2 + a1 y + a0.
template <typename Scalar>
Scalar cubic_max_real_root(Scalar a2, Scalar a1, Scalar a0)
{
  const Scalar shift = a2 / Scalar(3);
  const Scalar p = a1 - a2 * a2 / Scalar(3);
  const Scalar q = a0 - a2 * a1 / Scalar(3) + Scalar(2) * a2 * a2 * a2 / Scalar(27);
  const Scalar half_q = q / Scalar(2);
  const Scalar third_p = p / Scalar(3);
  const Scalar disc = half_q * half_q + third_p * third_p * third_p;
  if (disc > Scalar(0)) {
    const Scalar s = std::sqrt(disc);
    return std::cbrt(-half_q + s) + std::cbrt(-half_q - s) - shift;
  }
  if (p == Scalar(0))
    return -shift; // triple root
  // three real roots; the k = 0 branch is the largest
  const Scalar m = Scalar(2) * std::sqrt(-third_p);
  const Scalar arg = std::clamp(Scalar(3) * q / (p * m), Scalar(-1), Scalar(1));
  return m * std::cos(std::acos(arg) / Scalar(3)) - shift;
}

/// Both roots of the monic quadratic x^2 + b x + c, assuming they are real;
/// a slightly negative discriminant is treated as a double root.
template <typename Scalar>
std::array<Scalar, 2> quadratic_real_roots(Scalar b, Scalar c)
{
  const Scalar disc = b * b - Scalar(4) * c;
  const Scalar sq = disc > Scalar(0) ? std::sqrt(disc) : Scalar(0);
  if (b == Scalar(0))
    return {-sq / Scalar(2), sq / Scalar(2)};
  const Scalar t = -(b + std::copysign(sq, b)) / Scalar(2);
  const Scalar other = t != Scalar(0) ? c / t : -b / Scalar(2);
  return {std::min(t, other), std::max(t, other)};
}

template <typename Scalar>
Scalar newton_polish(const DepressedQuartic<Scalar>& f, Scalar x, int max_steps = 8)
{
  Scalar fx = f.value(x);
  for (int i = 0; i < max_steps && fx != Scalar(0); ++i) {
    const Scalar dfx = f.deriv(x);
    if (dfx == Scalar(0))
      break;
    const Scalar x_next = x - fx / dfx;
    const Scalar fx_next = f.value(x_next);
    if (std::abs(fx_next) >= std::abs(fx))
      break;
    x = x_next;
    fx = fx_next;
  }
  return x;
}

/// Re-derive a close pair of roots by deflation. Polish cannot separate a
/// near-double root from coefficient round-off, but the pair's own quadratic
/// x^2 + beta x + gamma is known accurately from the two complementary roots
/// (Vieta: the root sum is zero and the root product is r), so the pair
/// center is well conditioned and the split is certified against the
/// discriminant's round-off level; below it the pair collapses to a double
/// root at the center.
template <typename Scalar>
void refine_pair(const DepressedQuartic<Scalar>& f, Scalar& lo, Scalar& hi, Scalar other1,
                 Scalar other2)
{
  constexpr Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar beta = other1 + other2; // -(lo + hi)
  const Scalar prod = other1 * other2;
  const Scalar scale = std::max({Scalar(1), std::abs(other1), std::abs(other2), std::abs(lo)});
  // the complementary roots carry Newton-floor noise, not just eps
  const Scalar u1 = f.root_uncertainty(other1);
  const Scalar u2 = f.root_uncertainty(other2);
  const Scalar beta_err = u1 + u2 + eps * (std::abs(other1) + std::abs(other2));

  Scalar gamma, gamma_err;
  if (std::min(std::abs(other1), std::abs(other2)) > Scalar(1e-3) * scale) {
    gamma = f.r / prod;
    gamma_err = std::abs(gamma) * (u1 / std::abs(other1) + u2 / std::abs(other2) +
                                   Scalar(8) * eps);
  } else {
    gamma = f.p + beta * beta - prod;
    gamma_err = Scalar(8) * eps * (std::abs(f.p) + beta * beta + std::abs(prod)) +
                Scalar(2) * std::abs(beta) * beta_err + u1 * std::abs(other2) +
                u2 * std::abs(other1);
  }
  const Scalar disc = beta * beta - Scalar(4) * gamma;
  const Scalar disc_noise = Scalar(2) * std::abs(beta) * beta_err + Scalar(4) * gamma_err +
                            Scalar(8) * eps * (beta * beta + Scalar(4) * std::abs(gamma));
  if (disc <= disc_noise) {
    // the discriminant cannot resolve the split, but the value at the
    // (well-conditioned) center still can, down to the coefficient-rounding
    // level that value_floor measures
    const Scalar center = -beta / Scalar(2);
    const Scalar fc = f.value_compensated(center);
    const Scalar d2 = f.deriv2(center);
    const Scalar d2_floor =
        Scalar(8) * eps * (Scalar(12) * center * center + Scalar(2) * std::abs(f.p));
    if (std::abs(fc) > f.value_floor(center) && std::abs(d2) > d2_floor &&
        fc * d2 < Scalar(0)) {
      const Scalar half_split = std::sqrt(Scalar(-2) * fc / d2);
      lo = center - half_split;
      hi = center + half_split;
      return;
    }
    if (std::abs(fc) <= f.residual_budget()) {
      lo = hi = center; // numerically exact double root
      return;
    }
    return; // keep the polished pair
  }
  const auto pair = quadratic_real_roots(beta, gamma);
  lo = pair[0];
  hi = pair[1];
  if (hi - lo > Scalar(1e-5) * scale) {
    lo = newton_polish(f, lo, 2);
    hi = newton_polish(f, hi, 2);
  }
}

/// Refine a cluster of three roots. An exact triple root is a root of f''
/// (closed form since f'' is quadratic with no linear term) at which f and f'
/// both vanish to round-off; otherwise the tightest sub-pair is deflated
/// against the remaining two roots.
template <typename Scalar>
void refine_triple(const DepressedQuartic<Scalar>& f, Scalar& r0, Scalar& r1, Scalar& r2,
                   Scalar far_root)
{
  if (f.p < Scalar(0)) {
    const Scalar c_mag = std::sqrt(-f.p / Scalar(6));
    const Scalar mean = (r0 + r1 + r2) / Scalar(3);
    const Scalar c = mean >= Scalar(0) ? c_mag : -c_mag;
    if (std::abs(f.value(c)) <= f.value_floor(c) && std::abs(f.deriv(c)) <= f.deriv_floor(c)) {
      r0 = r1 = r2 = c;
      return;
    }
  }
  if (r1 - r0 <= r2 - r1)
    refine_pair(f, r0, r1, r2, far_root);
  else
    refine_pair(f, r1, r2, r0, far_root);
}

} // namespace detail

/// All four roots of x^4 + p x^2 + q x + r, ascending. The quartic is assumed
/// to have only real roots (it is the characteristic polynomial of a Hermitian
/// matrix); tiny negative discriminants from round-off are clamped. Solved by
/// the resolvent cubic and factorization into two quadratics, then Newton
/// polish and refinement of near-multiple root clusters.
template <typename Scalar>
std::array<Scalar, 4> solve_depressed_quartic(Scalar p, Scalar q, Scalar r)
{
  const DepressedQuartic<Scalar> f{p, q, r};

  // scale of the roots, used for negligibility thresholds
  const Scalar x_scale = std::max(
      {Scalar(1), std::sqrt(std::abs(p)), std::cbrt(std::abs(q)), std::sqrt(std::sqrt(std::abs(r)))});

  std::array<Scalar, 4> roots;
  const Scalar q_floor =
      Scalar(16) * std::numeric_limits<Scalar>::epsilon() * x_scale * x_scale * x_scale;
  const Scalar m = std::max(
      Scalar(0), detail::cubic_max_real_root(p, p * p / Scalar(4) - r, -q * q / Scalar(8)));
  const Scalar s = std::sqrt(Scalar(2) * m);

  if (std::abs(q) <= q_floor || s <= Scalar(16) * std::numeric_limits<Scalar>::epsilon() * x_scale) {
    // biquadratic: x^2 = y with y^2 + p y + r = 0
    const auto y = detail::quadratic_real_roots(p, r);
    const Scalar y0 = std::max(Scalar(0), y[0]);
    const Scalar y1 = std::max(Scalar(0), y[1]);
    const Scalar a = std::sqrt(y0);
    const Scalar b = std::sqrt(y1);
    roots = {-b, -a, a, b};
  } else {
    // f factors as (x^2 + s x + u)(x^2 - s x + v)
    const Scalar u = p / Scalar(2) + m - q / (Scalar(2) * s);
    const Scalar v = p / Scalar(2) + m + q / (Scalar(2) * s);
    const auto ab = detail::quadratic_real_roots(s, u);
    const auto cd = detail::quadratic_real_roots(-s, v);
    roots = {ab[0], ab[1], cd[0], cd[1]};
  }

  for (Scalar& x : roots)
    x = detail::newton_polish(f, x);
  std::sort(roots.begin(), roots.end());

  // near-multiple clusters
  const Scalar cluster_tol =
      Scalar(1e-4) * std::max(Scalar(1), std::max(std::abs(roots[0]), std::abs(roots[3])));
  int i = 0;
  while (i < 4) {
    int j = i + 1;
    while (j < 4 && roots[j] - roots[j - 1] <= cluster_tol)
      ++j;
    switch (j - i) {
      case 2: {
        const int o1 = i == 0 ? 2 : 0;
        const int o2 = j == 4 ? 1 : 3;
        detail::refine_pair(f, roots[i], roots[i + 1], roots[o1], roots[o2]);
        break;
      }
      case 3:
        detail::refine_triple(f, roots[i], roots[i + 1], roots[i + 2], roots[i == 0 ? 3 : 0]);
        break;
      default:
        break; // singletons and near-quadruples keep their polished values
    }
    i = j;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

} // namespace xxzdm
