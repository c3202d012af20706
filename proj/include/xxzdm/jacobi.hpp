#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "xxzdm/types.hpp"

namespace xxzdm {

template <typename Scalar, int N>
struct HermitianJacobiResult {
  Eigen::Matrix<Scalar, N, 1> values;                  // ascending
  Eigen::Matrix<std::complex<Scalar>, N, N> vectors;   // orthonormal columns, paired with values
  int sweeps = 0;
};

/// Cyclic-by-rows complex Jacobi diagonalization of a Hermitian matrix.
/// Iterates until the off-diagonal Frobenius norm falls below 1e-14 times the
/// Frobenius norm of the input; throws NoConvergence past the sweep budget.
template <typename Scalar, int N>
HermitianJacobiResult<Scalar, N> hermitian_jacobi(Eigen::Matrix<std::complex<Scalar>, N, N> h,
                                                  int max_sweeps = 100)
{
  using C = std::complex<Scalar>;
  using MatC = Eigen::Matrix<C, N, N>;

  h = ((h + h.adjoint()) / Scalar(2)).eval();
  MatC v = MatC::Identity();

  const Scalar tol = Scalar(1e-14) * h.norm();
  const auto off_norm = [&h] {
    Scalar sum = 0;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j)
        sum += Scalar(2) * std::norm(h(i, j));
    return std::sqrt(sum);
  };

  HermitianJacobiResult<Scalar, N> result;
  int sweep = 0;
  for (; sweep <= max_sweeps; ++sweep) {
    if (off_norm() <= tol)
      break;
    if (sweep == max_sweeps)
      throw Error(ErrorKind::NoConvergence, "Jacobi sweep budget exhausted");
    for (int p = 0; p < N - 1; ++p) {
      for (int q = p + 1; q < N; ++q) {
        const Scalar apq = std::abs(h(p, q));
        if (apq == Scalar(0))
          continue;
        const C phase = h(p, q) / apq;
        const Scalar app = std::real(h(p, p));
        const Scalar aqq = std::real(h(q, q));
        const Scalar tau = (app - aqq) / (Scalar(2) * apq);
        const Scalar t = (tau >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                         (std::abs(tau) + std::sqrt(Scalar(1) + tau * tau));
        const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
        const Scalar s = t * c;
        // plane rotation U: U(p,p)=c, U(p,q)=-s*phase, U(q,p)=s*conj(phase), U(q,q)=c
        for (int k = 0; k < N; ++k) { // h <- h U (columns)
          const C hkp = h(k, p);
          const C hkq = h(k, q);
          h(k, p) = c * hkp + s * std::conj(phase) * hkq;
          h(k, q) = -s * phase * hkp + c * hkq;
        }
        for (int k = 0; k < N; ++k) { // h <- U^dagger h (rows)
          const C hpk = h(p, k);
          const C hqk = h(q, k);
          h(p, k) = c * hpk + s * phase * hqk;
          h(q, k) = -s * std::conj(phase) * hpk + c * hqk;
        }
        for (int k = 0; k < N; ++k) { // accumulate v <- v U
          const C vkp = v(k, p);
          const C vkq = v(k, q);
          v(k, p) = c * vkp + s * std::conj(phase) * vkq;
          v(k, q) = -s * phase * vkp + c * vkq;
        }
        h(p, q) = C(0);
        h(q, p) = C(0);
      }
    }
  }
  result.sweeps = sweep;

  std::array<int, N> order;
  for (int i = 0; i < N; ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(),
            [&h](int a, int b) { return std::real(h(a, a)) < std::real(h(b, b)); });
  for (int i = 0; i < N; ++i) {
    result.values(i) = std::real(h(order[i], order[i]));
    result.vectors.col(i) = v.col(order[i]);
  }
  return result;
}

} // namespace xxzdm
