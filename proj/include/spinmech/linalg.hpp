#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <functional>
#include <stdexcept>

// Small dense linear-algebra kernels shared by the solvers. Everything is
// expression-friendly and templated on the scalar; Eigen is the only math
// dependency.
namespace spinmech::linalg {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Kronecker product A (x) B.
template <typename DerivedA, typename DerivedB>
Mat<typename DerivedA::Scalar> kron(const Eigen::MatrixBase<DerivedA>& A,
                                    const Eigen::MatrixBase<DerivedB>& B) {
  using Scalar = typename DerivedA::Scalar;
  Mat<Scalar> out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

// Column-major vectorisation and its inverse.
template <typename Derived>
Vec<typename Derived::Scalar> vec(const Eigen::MatrixBase<Derived>& M) {
  Vec<typename Derived::Scalar> v(M.size());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < M.cols(); ++j)
    for (Eigen::Index i = 0; i < M.rows(); ++i) v(k++) = M(i, j);
  return v;
}

template <typename Scalar>
Mat<Scalar> unvec(const Vec<Scalar>& v, Eigen::Index rows, Eigen::Index cols) {
  Mat<Scalar> M(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = v(k++);
  return M;
}

// Continuous Lyapunov equation A X + X A^T + Q = 0, solved by
// vectorisation: (I (x) A + A (x) I) vec(X) = -vec(Q). Sizes here are tiny
// (4x4 moment systems), so the n^2 x n^2 dense solve is exact and cheap.
template <typename Scalar>
Mat<Scalar> lyapunov_solve(const Mat<Scalar>& A, const Mat<Scalar>& Q) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || Q.rows() != n || Q.cols() != n)
    throw std::invalid_argument("lyapunov_solve: dimension mismatch");
  Mat<Scalar> I = Mat<Scalar>::Identity(n, n);
  Mat<Scalar> K = kron(I, A) + kron(A, I);  // acts on column-stacked X
  Vec<Scalar> x = K.partialPivLu().solve(-vec(Q));
  Mat<Scalar> X = unvec(x, n, n);
  return ((X + X.transpose()) / Scalar(2)).eval();
}

// Symplectic form for quadrature ordering (X1, P1, X2, P2, ...).
inline Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int m = 0; m < n_modes; ++m) {
    omega(2 * m, 2 * m + 1) = 1.0;
    omega(2 * m + 1, 2 * m) = -1.0;
  }
  return omega;
}

// Van Loan block-exponential: propagator and accumulated diffusion for
// d sigma/dt = A sigma + sigma A^T + D over a step of length t.
//   Phi = e^{A t},  Q_t = int_0^t e^{A s} D e^{A^T s} ds
inline void van_loan_step(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D, double t,
                          Eigen::MatrixXd& Phi, Eigen::MatrixXd& Qt) {
  const Eigen::Index n = A.rows();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  M.topLeftCorner(n, n) = A;
  M.topRightCorner(n, n) = D;
  M.bottomRightCorner(n, n) = -A.transpose();
  Eigen::MatrixXd E = (M * t).exp();
  Phi = E.topLeftCorner(n, n);
  Qt = E.topRightCorner(n, n) * Phi.transpose();
  Qt = 0.5 * (Qt + Qt.transpose());
}

struct StepUnderflow : std::runtime_error {
  explicit StepUnderflow(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive embedded Runge-Kutta (Cash-Karp 4(5)) on a flat state vector.
// Used for the moment ODEs and for vectorised density-matrix propagation;
// the right-hand sides are cheap, accuracy is set by rtol/atol.
template <typename Scalar>
Vec<Scalar> integrate_rk45(const std::function<Vec<Scalar>(double, const Vec<Scalar>&)>& f,
                           Vec<Scalar> y, double t0, double t1, double dt_max,
                           double rtol = 1e-10, double atol = 1e-12) {
  static const double a2 = 1.0 / 5, a3 = 3.0 / 10, a4 = 3.0 / 5, a5 = 1.0, a6 = 7.0 / 8;
  static const double b21 = 1.0 / 5;
  static const double b31 = 3.0 / 40, b32 = 9.0 / 40;
  static const double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
  static const double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27, b54 = 35.0 / 27;
  static const double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                      b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
  static const double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594, c6 = 512.0 / 1771;
  static const double d1 = 2825.0 / 27648, d3 = 18575.0 / 48384, d4 = 13525.0 / 55296,
                      d5 = 277.0 / 14336, d6 = 1.0 / 4;

  if (t1 < t0) throw std::invalid_argument("integrate_rk45: negative time span");
  double t = t0;
  double h = std::min(dt_max, t1 - t0);
  if (h <= 0.0) return y;
  const double t_span = t1 - t0;
  while (t < t1) {
    h = std::min(h, t1 - t);
    Vec<Scalar> k1 = f(t, y);
    Vec<Scalar> k2 = f(t + a2 * h, y + h * (b21 * k1));
    Vec<Scalar> k3 = f(t + a3 * h, y + h * (b31 * k1 + b32 * k2));
    Vec<Scalar> k4 = f(t + a4 * h, y + h * (b41 * k1 + b42 * k2 + b43 * k3));
    Vec<Scalar> k5 = f(t + a5 * h, y + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
    Vec<Scalar> k6 = f(t + a6 * h, y + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
    Vec<Scalar> y5 = y + h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
    Vec<Scalar> y4 = y + h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);
    double err = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      double sc = atol + rtol * std::max(std::abs(y(i)), std::abs(y5(i)));
      err = std::max(err, std::abs(y5(i) - y4(i)) / sc);
    }
    if (err <= 1.0) {
      t += h;
      y = y5;
    }
    double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.1, 5.0);
    h = std::min(h, dt_max);
    if (h < 1e-15 * t_span)
      throw StepUnderflow("integrate_rk45: step size underflow at t=" + std::to_string(t));
  }
  return y;
}

template <typename Scalar>
double abs_max(const Vec<Scalar>& v) {
  double m = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v(i)));
  return m;
}

}  // namespace spinmech::linalg
