#pragma once

// Dense reference implementations used as test oracles. They work with full
// N x N matrices and general LU solves, and share no code with the library's
// structured paths.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>

namespace oracle {

using Mat = Eigen::MatrixXd;

// [[A, -B^T], [B, 0]]
inline Mat embed(const Mat& a, const Mat& b) {
  const Eigen::Index p = a.rows();
  const Eigen::Index n = p + b.rows();
  Mat v = Mat::Zero(n, n);
  v.topLeftCorner(p, p) = a;
  v.topRightCorner(p, n - p) = -b.transpose();
  v.bottomLeftCorner(n - p, p) = b;
  return v;
}

inline Mat solve(const Mat& m, const Mat& rhs) { return m.fullPivLu().solve(rhs); }

// (I + V)^{-1} RHS with a dense N x N factorization.
inline Mat ipv_solve(const Mat& v, const Mat& rhs) {
  return solve(Mat::Identity(v.rows(), v.cols()) + v, rhs);
}

// First p columns of S (I - W)(I + W)^{-1} for any skew W.
inline Mat cayley_inverse(const Mat& s, const Mat& w, Eigen::Index p) {
  const Eigen::Index n = s.rows();
  const Mat id = Mat::Identity(n, n);
  // (I - W)(I + W)^{-1} = ((I + W)^{-T} (I - W)^T)^T
  const Mat q = solve((id + w).transpose(), (id - w).transpose()).transpose();
  return (s * q).leftCols(p);
}

// Cayley retraction (I + W)^{-1}(I - W) U with W = Skew(U D^T P_U),
// P_U = I - U U^T / 2, all dense.
inline Mat cayley_retraction(const Mat& u, const Mat& d) {
  const Eigen::Index n = u.rows();
  const Mat id = Mat::Identity(n, n);
  const Mat pu = id - 0.5 * u * u.transpose();
  const Mat x = u * d.transpose() * pu;
  const Mat w = 0.5 * (x - x.transpose());
  return solve(id + w, (id - w) * u);
}

inline double central_difference(const std::function<double(double)>& phi, double h) {
  return (phi(h) - phi(-h)) / (2.0 * h);
}

// |fd - an| <= tol * max(|fd|, |an|), or below the rounding noise of a
// central difference quotient on a cost of size |f0|.
inline bool fd_agrees(double fd, double an, double f0, double tol, double h) {
  const double err = std::abs(fd - an);
  const double noise = 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f0)) / h;
  return err <= tol * std::max(std::abs(fd), std::abs(an)) || err <= noise;
}

}  // namespace oracle
