#pragma once

// Scaling-and-squaring exponential shared by dense matrices and structured
// block matrices. The algebra type must provide +, -, scalar *, matrix *,
// and the free functions identity_like(a), norm1(a) and solve(q, p) (q x = p).

#include <array>
#include <cmath>
#include <cstddef>

#include <Eigen/Dense>

namespace mbt::detail {

Eigen::MatrixXd identity_like(const Eigen::MatrixXd& a);
double norm1(const Eigen::MatrixXd& a);
/// Solves q x = p with partial-pivot LU; throws NumericError when q is singular.
Eigen::MatrixXd solve(const Eigen::MatrixXd& q, const Eigen::MatrixXd& p);

inline constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
inline constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
inline constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                                 25200.0,    1512.0,    56.0,      1.0};
inline constexpr std::array<double, 10> kPade9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
inline constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// Backward-error bounds for each degree in double precision.
inline constexpr double kTheta3 = 1.495585217958292e-2;
inline constexpr double kTheta5 = 2.539398330063230e-1;
inline constexpr double kTheta7 = 9.504178996162932e-1;
inline constexpr double kTheta9 = 2.097847961257068e0;
inline constexpr double kTheta13 = 5.371920351148152e0;

template <class M, std::size_t N>
M pade_low_degree(const M& a, const std::array<double, N>& b) {
  const M id = identity_like(a);
  const M a2 = a * a;
  M odd = b[1] * id;
  M even = b[0] * id;
  M power = id;
  for (std::size_t j = 2; j < N; j += 2) {
    power = power * a2;
    even = even + b[j] * power;
    if (j + 1 < N) odd = odd + b[j + 1] * power;
  }
  const M u = a * odd;
  return solve(even - u, even + u);
}

template <class M>
M pade13(const M& a) {
  const auto& b = kPade13;
  const M id = identity_like(a);
  const M a2 = a * a;
  const M a4 = a2 * a2;
  const M a6 = a4 * a2;
  const M u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
  const M u = a * (a6 * u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const M v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
  const M v = a6 * v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return solve(v - u, v + u);
}

template <class M>
M expm_scaling_squaring(const M& a) {
  const double norm = norm1(a);
  if (norm <= kTheta3) return pade_low_degree(a, kPade3);
  if (norm <= kTheta5) return pade_low_degree(a, kPade5);
  if (norm <= kTheta7) return pade_low_degree(a, kPade7);
  if (norm <= kTheta9) return pade_low_degree(a, kPade9);
  int squarings = 0;
  if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  M r = pade13<M>(std::ldexp(1.0, -squarings) * a);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

}  // namespace mbt::detail
