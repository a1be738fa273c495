#include "spinmech/gaussian.hpp"

#include <cmath>

#include "spinmech/constants.hpp"
#include "spinmech/linalg.hpp"

namespace spinmech {

namespace {

void check_rate(double v, const char* name) {
  if (std::isnan(v) || v < 0)
    throw std::invalid_argument(std::string("build_model: ") + name + " must be finite and >= 0");
}

}  // namespace

GaussianModel build_model(const HamiltonianChoice& h, const RateSet& rates, double N_m) {
  check_rate(rates.gamma_m_diff, "gamma_m_diff");
  check_rate(rates.gamma_at_diff, "gamma_at_diff");
  check_rate(rates.gamma_at_cool, "gamma_at_cool");
  check_rate(rates.gamma_m_th, "gamma_m_th");
  check_rate(N_m, "N_m");
  if (std::isnan(rates.g_eff)) throw std::invalid_argument("build_model: g_eff is NaN");
  if (h.variant == HamiltonianVariant::BeamsplitterRWA && !(rates.g_eff < h.omega_m))
    throw std::invalid_argument("build_model: BeamsplitterRWA requires g_eff < omega_m");

  // gamma_m is fixed by the thermal rate: gamma_m N_m = gamma_m_th.
  double gamma_m = 0;
  if (N_m > 0) {
    gamma_m = rates.gamma_m_th / N_m;
  } else if (rates.gamma_m_th > 0) {
    throw std::invalid_argument("build_model: gamma_m_th > 0 requires N_m > 0");
  }

  const double g = rates.g_eff;
  const double om = h.omega_m;
  const double os = h.omega_spin();
  const double gs = rates.gamma_at_tot();

  Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
  A(0, 0) = -0.5 * gamma_m;
  A(0, 1) = om;
  A(1, 0) = -om;
  A(1, 1) = -0.5 * gamma_m;
  A(2, 2) = -0.5 * gs;
  A(2, 3) = os;
  A(3, 2) = -os;
  A(3, 3) = -0.5 * gs;
  if (h.variant == HamiltonianVariant::FullQuadrature) {
    A(1, 2) = g;   // dP_m/dt += g X_s
    A(3, 0) = g;   // dP_s/dt += g X_m
  } else {
    // -g (a^dag S + S^dag a) = -g (X_m X_s + P_m P_s)
    A(1, 2) = g;
    A(3, 0) = g;
    A(0, 3) = -g;  // dX_m/dt -= g P_s
    A(2, 1) = -g;  // dX_s/dt -= g P_m
  }

  Eigen::Matrix4d D = Eigen::Matrix4d::Zero();
  D(0, 0) = gamma_m * (N_m + 0.5);
  D(1, 1) = gamma_m * (N_m + 0.5) + rates.gamma_m_diff;  // D[X_m] feeds P_m only
  D(2, 2) = 0.5 * gs;
  D(3, 3) = 0.5 * gs;
  return {A, D};
}

double spectral_abscissa(const GaussianModel& model) {
  Eigen::EigenSolver<Eigen::Matrix4d> es(model.drift_A, false);
  return es.eigenvalues().real().maxCoeff();
}

double lyapunov_residual(const GaussianModel& model, const MomentState& s) {
  const Eigen::Matrix4d R =
      model.drift_A * s.cov + s.cov * model.drift_A.transpose() + model.diffusion_D;
  const double scale =
      model.drift_A.norm() * s.cov.norm() + model.diffusion_D.norm();
  return scale > 0 ? R.norm() / scale : R.norm();
}

MomentState steady_state(const GaussianModel& model) {
  const double abscissa = spectral_abscissa(model);
  if (abscissa >= 0) throw UnstableModel(abscissa);
  MomentState s;
  s.mean.setZero();
  linalg::Mat<double> A = model.drift_A, D = model.diffusion_D;
  s.cov = linalg::lyapunov_solve<double>(A, D);
  const double rel = lyapunov_residual(model, s);
  if (rel > 1e-10)
    throw std::runtime_error("steady_state: Lyapunov residual " + std::to_string(rel) +
                             " exceeds 1e-10");
  return s;
}

MomentState evolve(const GaussianModel& model, const MomentState& s0, double t, double dt_max,
                   EvolveBackend backend) {
  if (t < 0) throw std::invalid_argument("evolve: t must be >= 0");
  if (t == 0) return s0;
  if (!(dt_max > 0)) throw std::invalid_argument("evolve: dt_max must be > 0");

  if (backend == EvolveBackend::MatrixExp) {
    Eigen::MatrixXd Phi, Qt;
    linalg::van_loan_step(model.drift_A, model.diffusion_D, t, Phi, Qt);
    MomentState out;
    out.mean = Phi * s0.mean;
    out.cov = Phi * s0.cov * Phi.transpose() + Qt;
    out.cov = 0.5 * (out.cov + out.cov.transpose());
    return out;
  }

  // Pack (mean, upper-triangular cov) into a 14-vector for the RK driver.
  auto pack = [](const MomentState& s) {
    linalg::Vec<double> y(14);
    y.head<4>() = s.mean;
    int k = 4;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) y(k++) = s.cov(i, j);
    return y;
  };
  auto unpack = [](const linalg::Vec<double>& y) {
    MomentState s;
    s.mean = y.head<4>();
    int k = 4;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        s.cov(i, j) = y(k);
        s.cov(j, i) = y(k);
        ++k;
      }
    return s;
  };
  const Eigen::Matrix4d& A = model.drift_A;
  const Eigen::Matrix4d& D = model.diffusion_D;
  std::function<linalg::Vec<double>(double, const linalg::Vec<double>&)> f =
      [&](double, const linalg::Vec<double>& y) {
        MomentState s;
        s.mean = y.head<4>();
        int k = 4;
        for (int i = 0; i < 4; ++i)
          for (int j = i; j < 4; ++j) {
            s.cov(i, j) = y(k);
            s.cov(j, i) = y(k);
            ++k;
          }
        Eigen::Vector4d dm = A * s.mean;
        Eigen::Matrix4d dc = A * s.cov + s.cov * A.transpose() + D;
        linalg::Vec<double> dy(14);
        dy.head<4>() = dm;
        k = 4;
        for (int i = 0; i < 4; ++i)
          for (int j = i; j < 4; ++j) dy(k++) = dc(i, j);
        return dy;
      };
  linalg::Vec<double> y = linalg::integrate_rk45<double>(f, pack(s0), 0.0, t, dt_max);
  return unpack(y);
}

double occupation(const MomentState& s, Mode mode) {
  const int o = (mode == Mode::Mechanics) ? 0 : 2;
  const double margin = physicality_margin(s);
  if (margin < -1e-8)
    throw std::invalid_argument("occupation: covariance is unphysical (margin " +
                                std::to_string(margin) + ")");
  const double xx = s.cov(o, o) + s.mean(o) * s.mean(o);
  const double pp = s.cov(o + 1, o + 1) + s.mean(o + 1) * s.mean(o + 1);
  return 0.5 * (xx + pp - 1.0);
}

double physicality_margin(const MomentState& s) {
  Eigen::Matrix4cd M = s.cov.cast<std::complex<double>>();
  const Eigen::MatrixXd omega = linalg::symplectic_form(2);
  M += std::complex<double>(0, 0.5) * omega.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<CoolingPoint> cooling_curve(const RateSet& base, const HamiltonianChoice& h,
                                        const std::vector<double>& geff_grid,
                                        const std::vector<double>& cool_grid, double N_m) {
  if (geff_grid.empty() || cool_grid.empty())
    throw std::invalid_argument("cooling_curve: grids must be non-empty");
  std::vector<CoolingPoint> out;
  out.reserve(geff_grid.size() * cool_grid.size());
  for (double gc : cool_grid) {
    for (double g : geff_grid) {
      CoolingPoint pt;
      pt.g_eff = g;
      pt.gamma_cool = gc;
      RateSet r = base;
      r.g_eff = g;
      r.gamma_at_cool = gc;
      try {
        const MomentState s = steady_state(build_model(h, r, N_m));
        pt.n_ss = occupation(s, Mode::Mechanics);
        pt.stable = true;
      } catch (const UnstableModel& e) {
        pt.stable = false;
        pt.error = e.what();
      } catch (const std::exception& e) {
        pt.stable = false;
        pt.error = e.what();
      }
      out.push_back(std::move(pt));
    }
  }
  return out;
}

double rabi_exchange_period(const RateSet& rates, double omega_m) {
  if (!(rates.g_eff > 0)) throw std::invalid_argument("rabi_exchange_period: g_eff must be > 0");
  if (!(rates.g_eff < omega_m))
    throw std::invalid_argument("rabi_exchange_period: beamsplitter picture needs g_eff < omega_m");
  return constants::pi / (2.0 * rates.g_eff);
}

}  // namespace spinmech
