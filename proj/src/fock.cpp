#include "spinmech/fock.hpp"

#include <cmath>

#include "spinmech/linalg.hpp"

namespace spinmech::fock {

using linalg::kron;
using Complex = std::complex<double>;

CMat destroy_op(int n) {
  CMat a = CMat::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
  return a;
}

Operators make_operators(const TruncatedSpace& space) {
  space.validate();
  const CMat am1 = destroy_op(space.dim_mech);
  const CMat as1 = destroy_op(space.dim_spin);
  const CMat Im = CMat::Identity(space.dim_mech, space.dim_mech);
  const CMat Is = CMat::Identity(space.dim_spin, space.dim_spin);
  Operators ops;
  ops.a_m = kron(am1, Is);
  ops.S = kron(Im, as1);
  const Complex i(0, 1);
  const double rt2 = std::sqrt(2.0);
  ops.X_m = (ops.a_m + ops.a_m.adjoint()) / rt2;
  ops.P_m = i * (ops.a_m.adjoint() - ops.a_m) / rt2;
  ops.X_s = (ops.S + ops.S.adjoint()) / rt2;
  ops.P_s = i * (ops.S.adjoint() - ops.S) / rt2;
  ops.n_m = ops.a_m.adjoint() * ops.a_m;
  ops.n_s = ops.S.adjoint() * ops.S;
  return ops;
}

CMat hamiltonian(const TruncatedSpace& space, const HamiltonianChoice& h, double g_eff) {
  const Operators ops = make_operators(space);
  CMat H = h.omega_m * ops.n_m + h.omega_spin() * ops.n_s;
  if (h.variant == HamiltonianVariant::FullQuadrature) {
    H -= g_eff * ops.X_m * ops.X_s;
  } else {
    H -= g_eff * (ops.a_m.adjoint() * ops.S + ops.S.adjoint() * ops.a_m);
  }
  return H;
}

namespace {

// vec(L rho L^dag) etc. in the column-stacking convention.
void add_dissipator(CMat& Lsup, const CMat& L, double rate) {
  if (rate == 0.0) return;
  const int n = int(L.rows());
  const CMat I = CMat::Identity(n, n);
  const CMat LdL = L.adjoint() * L;
  Lsup += rate * (kron(L.conjugate(), L) - 0.5 * kron(I, LdL) - 0.5 * kron(LdL.transpose(), I));
}

}  // namespace

CMat build_liouvillian(const TruncatedSpace& space, const HamiltonianChoice& h,
                       const RateSet& rates, double N_m) {
  space.validate();
  if (N_m < 0 || std::isnan(N_m)) throw std::invalid_argument("build_liouvillian: bad N_m");
  double gamma_m = 0;
  if (N_m > 0) gamma_m = rates.gamma_m_th / N_m;
  else if (rates.gamma_m_th > 0)
    throw std::invalid_argument("build_liouvillian: gamma_m_th > 0 requires N_m > 0");

  const Operators ops = make_operators(space);
  const CMat H = hamiltonian(space, h, rates.g_eff);
  const int n = space.dim();
  const CMat I = CMat::Identity(n, n);
  const Complex i(0, 1);

  CMat Lsup = -i * (kron(I, H) - kron(H.transpose(), I));
  add_dissipator(Lsup, ops.X_m, rates.gamma_m_diff);
  add_dissipator(Lsup, ops.S, rates.gamma_at_tot());
  add_dissipator(Lsup, ops.a_m, gamma_m * (N_m + 1.0));
  add_dissipator(Lsup, ops.a_m.adjoint(), gamma_m * N_m);
  return Lsup;
}

double boundary_population_mech(const CMat& rho, const TruncatedSpace& space) {
  double p = 0;
  const int top = space.dim_mech - 1;
  for (int s = 0; s < space.dim_spin; ++s) {
    const int idx = top * space.dim_spin + s;
    p += rho(idx, idx).real();
  }
  return p;
}

double boundary_population_spin(const CMat& rho, const TruncatedSpace& space) {
  double p = 0;
  const int top = space.dim_spin - 1;
  for (int m = 0; m < space.dim_mech; ++m) {
    const int idx = m * space.dim_spin + top;
    p += rho(idx, idx).real();
  }
  return p;
}

SteadyStateResult steady_state_nullspace(const CMat& L, const TruncatedSpace& space,
                                         double boundary_threshold) {
  const int n = space.dim();
  if (L.rows() != n * n || L.cols() != n * n)
    throw std::invalid_argument("steady_state_nullspace: Liouvillian dimension mismatch");

  // Replace one row by the trace functional; a unique trace-one steady
  // state makes the system nonsingular.
  CMat M = L;
  for (int c = 0; c < n * n; ++c) M(0, c) = 0;
  for (int k = 0; k < n; ++k) M(0, k * n + k) = 1.0;
  CVec rhs = CVec::Zero(n * n);
  rhs(0) = 1.0;

  Eigen::PartialPivLU<CMat> lu(M);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-13)) throw DegenerateSteadyState(rcond);
  CVec v = lu.solve(rhs);

  CMat rho = linalg::unvec<Complex>(v, n, n);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  if (!(std::abs(tr) > 1e-12)) throw DegenerateSteadyState(rcond);
  rho /= tr;

  SteadyStateResult out;
  out.rho = rho;
  out.rcond = rcond;
  out.residual = (L * linalg::vec(rho)).norm() / L.norm();
  if (out.residual > 1e-9)
    throw std::runtime_error("steady_state_nullspace: residual " + std::to_string(out.residual) +
                             " exceeds 1e-9");
  const StateChecks chk = check_state(rho);
  if (chk.min_eigenvalue < -1e-8)
    throw std::runtime_error("steady_state_nullspace: state not positive (min eig " +
                             std::to_string(chk.min_eigenvalue) + ")");
  out.boundary_mech = boundary_population_mech(rho, space);
  out.boundary_spin = boundary_population_spin(rho, space);
  if (out.boundary_mech > boundary_threshold || out.boundary_spin > boundary_threshold)
    throw TruncationSuspect(out.boundary_mech, out.boundary_spin);
  return out;
}

CMat evolve_fock(const CMat& L, const CMat& rho0, double t, double rtol, double atol) {
  if (t < 0) throw std::invalid_argument("evolve_fock: t must be >= 0");
  if (t == 0) return rho0;
  const int n = int(rho0.rows());
  std::function<linalg::Vec<Complex>(double, const linalg::Vec<Complex>&)> f =
      [&L](double, const linalg::Vec<Complex>& v) { return (L * v).eval(); };
  // Adaptive step bounded by the fastest Liouvillian scale.
  const double scale = std::max(1.0, L.cwiseAbs().maxCoeff());
  const double dt_max = std::min(t, 0.5 / scale);
  CVec v = linalg::integrate_rk45<Complex>(f, linalg::vec(rho0), 0.0, t, dt_max, rtol, atol);
  CMat rho = linalg::unvec<Complex>(v, n, n);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho;
}

double occupation_fock(const CMat& rho, const Operators& ops, Mode mode) {
  const CMat& nop = (mode == Mode::Mechanics) ? ops.n_m : ops.n_s;
  return (rho * nop).trace().real();
}

std::pair<Eigen::Vector4d, Eigen::Matrix4d> moments_from_rho(const CMat& rho,
                                                             const Operators& ops) {
  const CMat* q[4] = {&ops.X_m, &ops.P_m, &ops.X_s, &ops.P_s};
  Eigen::Vector4d mean;
  for (int i = 0; i < 4; ++i) mean(i) = (rho * (*q[i])).trace().real();
  Eigen::Matrix4d cov;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const double sym = 0.5 * (rho * ((*q[i]) * (*q[j]) + (*q[j]) * (*q[i]))).trace().real();
      cov(i, j) = cov(j, i) = sym - mean(i) * mean(j);
    }
  return {mean, cov};
}

StateChecks check_state(const CMat& rho) {
  StateChecks c{};
  c.hermiticity = (rho - rho.adjoint()).norm();
  c.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  c.min_eigenvalue = es.eigenvalues().minCoeff();
  return c;
}

}  // namespace spinmech::fock
