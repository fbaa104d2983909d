// Copyright 2026 The evinlier authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evinlier/inference.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "evinlier/parallel.hpp"
#include "evinlier/quadrature.hpp"
#include "evinlier/specfun.hpp"

namespace evinlier {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double h_of(double eta, double beta, double u0) {
  return std::log(reg_lower_inc_gamma(eta, u0 / beta));
}

// Stable V(w) = [2(log(1+w) - w/(1+w)) - w^2/(1+w)^2] / w^3, the xi-xi
// integrand kernel; series branch avoids the small-w cancellation.
double xi_xi_kernel(double w) {
  if (std::abs(w) < 1e-3) {
    return 2.0 / 3.0 + w * (-1.5 + w * (2.4 - w * 10.0 / 3.0));
  }
  const double one_w = 1.0 + w;
  const double phi = std::log1p(w) - w / one_w;
  return (2.0 * phi - w * w / (one_w * one_w)) / (w * w * w);
}

struct TailExpectations {
  double e_xixi;    // E_Z of the xi-xi integrand (before the phi2 weight)
  double e_sigxi;   // E_Z[(1+xi) Z^2/(1+xi Z)^2 - Z/(1+xi Z)]
  double e_sigsig;  // E_Z[(1+xi) Z(2+xi Z)/(1+xi Z)^2 - 1]
};

TailExpectations tail_expectations(double xi) {
  const double z_max = xi > 0.0
                           ? std::expm1(-xi * std::log(1e-12)) / xi
                           : -1.0 / xi;  // finite endpoint when xi < 0

  auto density = [xi](double z) {
    const double w = xi * z;
    if (w <= -1.0) return 0.0;
    return std::exp(-(1.0 / xi + 1.0) * std::log1p(w));
  };

  TailExpectations out;
  out.e_xixi = integrate(
      [&](double z) {
        const double w = xi * z;
        if (w <= -1.0) return 0.0;
        const double one_w = 1.0 + w;
        const double f = z * z * z * xi_xi_kernel(w) -
                         z * z / (one_w * one_w);
        return f * density(z);
      },
      0.0, z_max, 1e-9, 1e-12);
  out.e_sigxi = integrate(
      [&](double z) {
        const double w = xi * z;
        if (w <= -1.0) return 0.0;
        const double one_w = 1.0 + w;
        const double f =
            (1.0 + xi) * z * z / (one_w * one_w) - z / one_w;
        return f * density(z);
      },
      0.0, z_max, 1e-9, 1e-12);
  out.e_sigsig = integrate(
      [&](double z) {
        const double w = xi * z;
        if (w <= -1.0) return 0.0;
        const double one_w = 1.0 + w;
        const double f = (1.0 + xi) * z * (2.0 + w) / (one_w * one_w) - 1.0;
        return f * density(z);
      },
      0.0, z_max, 1e-9, 1e-12);
  return out;
}

}  // namespace

FisherMatrix fisher_information(const FevimmParams& theta, double u0) {
  theta.validate();
  if (!(u0 > 0.0) || !std::isfinite(u0))
    throw std::domain_error("fisher_information: u0 must be > 0");
  if (theta.xi <= -0.5)
    throw std::domain_error(
        "fisher_information: information is infinite for xi <= -0.5");
  if (theta.xi >= 1.0)
    throw std::domain_error(
        "fisher_information: xi must lie below 1 for regular inference");

  const bool xi_zero = std::abs(theta.xi) < kXiZeroTol;
  FisherMatrix fm;
  fm.u0 = u0;
  fm.regime = xi_zero ? FisherRegime::XiZero : FisherRegime::XiNonzero;
  fm.labels = xi_zero
                  ? std::vector<std::string>{"phi1", "eta", "beta", "sigma",
                                             "phi2"}
                  : std::vector<std::string>{"phi1", "eta", "beta", "xi",
                                             "sigma", "phi2"};
  const std::size_t k = fm.labels.size();
  fm.entries.assign(k * k, 0.0);
  auto set = [&](std::size_t i, std::size_t j, double v) {
    fm.entries[i * k + j] = v;
    fm.entries[j * k + i] = v;
  };

  const double rest = 1.0 - theta.phi1 - theta.phi2;

  // Proportion block.
  set(0, 0, 1.0 / theta.phi1 + 1.0 / rest);
  set(k - 1, k - 1, 1.0 / theta.phi2 + 1.0 / rest);
  set(0, k - 1, 1.0 / rest);

  // Bulk block via central differences of h(eta, beta) = log G*(u0).
  {
    const double eta = theta.eta, beta = theta.beta;
    const double de = 1e-5 * eta, db = 1e-5 * beta;
    const double h0 = h_of(eta, beta, u0);
    const double hep = h_of(eta + de, beta, u0);
    const double hem = h_of(eta - de, beta, u0);
    const double hbp = h_of(eta, beta + db, u0);
    const double hbm = h_of(eta, beta - db, u0);
    const double hpp = h_of(eta + de, beta + db, u0);
    const double hpm = h_of(eta + de, beta - db, u0);
    const double hmp = h_of(eta - de, beta + db, u0);
    const double hmm = h_of(eta - de, beta - db, u0);
    const double h_ee = (hep - 2.0 * h0 + hem) / (de * de);
    const double h_bb = (hbp - 2.0 * h0 + hbm) / (db * db);
    const double h_eb = (hpp - hpm - hmp + hmm) / (4.0 * de * db);

    const double z = u0 / beta;
    const double gamma_ratio =
        eta * reg_lower_inc_gamma(eta + 1.0, z) / reg_lower_inc_gamma(eta, z);

    set(1, 1, rest * (trigamma(eta) + h_ee));
    set(1, 2, rest * (1.0 / beta + h_eb));
    set(2, 2, rest * (h_bb + 2.0 / (beta * beta) * gamma_ratio -
                      eta / (beta * beta)));
  }

  // Tail block.
  if (xi_zero) {
    set(3, 3, theta.phi2 / (theta.sigma * theta.sigma));
  } else {
    const TailExpectations e = tail_expectations(theta.xi);
    set(3, 3, theta.phi2 * e.e_xixi);
    set(3, 4, theta.phi2 / theta.sigma * e.e_sigxi);
    set(4, 4, theta.phi2 / (theta.sigma * theta.sigma) * e.e_sigsig);
  }

  return fm;
}

namespace {

Eigen::MatrixXd invert_information(const FisherMatrix& fm) {
  const auto k = static_cast<Eigen::Index>(fm.k());
  Eigen::MatrixXd info(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      info(i, j) = fm.at(static_cast<std::size_t>(i),
                         static_cast<std::size_t>(j));

  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() == Eigen::Success)
    return llt.solve(Eigen::MatrixXd::Identity(k, k));

  // Jitter fallback for near-boundary, ill-conditioned information.
  Eigen::MatrixXd jittered = info;
  const double jitter = 1e-10 * info.trace() / static_cast<double>(k);
  jittered.diagonal().array() += jitter;
  Eigen::LLT<Eigen::MatrixXd> retry(jittered);
  if (retry.info() == Eigen::Success)
    return retry.solve(Eigen::MatrixXd::Identity(k, k));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(info);
  const double min_ev = es.eigenvalues().minCoeff();
  const double max_ev = es.eigenvalues().maxCoeff();
  std::ostringstream msg;
  msg << "asymptotic_ci: singular information matrix (regime "
      << (fm.regime == FisherRegime::XiZero ? "xi_zero" : "xi_nonzero")
      << ", condition number "
      << (min_ev != 0.0 ? max_ev / min_ev
                        : std::numeric_limits<double>::infinity())
      << ")";
  throw std::runtime_error(msg.str());
}

}  // namespace

CiReport asymptotic_ci(const FevimmParams& theta_hat, std::size_t n,
                       double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("asymptotic_ci: alpha must lie in (0, 1)");
  if (n == 0) throw std::domain_error("asymptotic_ci: n must be positive");

  const FisherMatrix fm = fisher_information(theta_hat, theta_hat.u);
  const Eigen::MatrixXd inv = invert_information(fm);
  const double z = normal_quantile(1.0 - alpha / 2.0);

  CiReport report;
  report.regime = fm.regime;
  report.alpha = alpha;
  report.labels = fm.labels;
  const bool xi_zero = fm.regime == FisherRegime::XiZero;
  const std::vector<double> values =
      xi_zero ? std::vector<double>{theta_hat.phi1, theta_hat.eta,
                                    theta_hat.beta, theta_hat.sigma,
                                    theta_hat.phi2}
              : std::vector<double>{theta_hat.phi1, theta_hat.eta,
                                    theta_hat.beta, theta_hat.xi,
                                    theta_hat.sigma, theta_hat.phi2};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double var =
        inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) /
        static_cast<double>(n);
    const double se = var > 0.0 ? std::sqrt(var) : 0.0;
    report.estimate.push_back(values[i]);
    report.se.push_back(se);
    report.lower.push_back(values[i] - z * se);
    report.upper.push_back(values[i] + z * se);
  }
  return report;
}

std::array<double, 7> params_to_array(const FevimmParams& theta) {
  return {theta.phi1, theta.eta,   theta.beta, theta.u,
          theta.xi,   theta.sigma, theta.phi2};
}

FevimmParams params_from_array(const std::array<double, 7>& a) {
  return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
}

namespace {

double percentile_type7(std::vector<double>& sorted_values, double p) {
  if (sorted_values.empty()) return kNaN;
  const double h =
      (static_cast<double>(sorted_values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted_values.size()) return sorted_values.back();
  return sorted_values[lo] +
         (h - static_cast<double>(lo)) *
             (sorted_values[lo + 1] - sorted_values[lo]);
}

}  // namespace

BootstrapReport parametric_bootstrap(const FitResult& fit, std::size_t n,
                                     int B, std::uint64_t seed,
                                     const FitOptions& options, int threads) {
  if (B < 100)
    throw std::invalid_argument("parametric_bootstrap: B must be >= 100");
  if (n == 0)
    throw std::invalid_argument("parametric_bootstrap: n must be positive");

  std::vector<std::array<double, 7>> estimates(static_cast<std::size_t>(B));
  std::vector<char> ok(static_cast<std::size_t>(B), 0);

  parallel_for(static_cast<std::size_t>(B), threads, [&](std::size_t r) {
    const Dataset boot(
        sample_fit(fit, n, seed + static_cast<std::uint64_t>(r)));
    try {
      const FitResult refit = refit_from(boot, fit.model, fit.theta, options);
      if (refit.converged) {
        estimates[r] = params_to_array(refit.theta);
        ok[r] = 1;
      }
    } catch (const std::exception&) {
      // counted as a failed refit
    }
  });

  BootstrapReport report;
  report.B = B;
  report.labels.assign(kParamNames.begin(), kParamNames.end());
  for (std::size_t r = 0; r < estimates.size(); ++r)
    if (ok[r]) report.estimates.push_back(estimates[r]);
  report.n_failed = B - static_cast<int>(report.estimates.size());

  if (report.n_failed > B / 5) {
    std::ostringstream msg;
    msg << "parametric_bootstrap: " << report.n_failed << " of " << B
        << " refits failed to converge (> 20%)";
    throw std::runtime_error(msg.str());
  }

  const auto m = static_cast<double>(report.estimates.size());
  for (std::size_t j = 0; j < 7; ++j) {
    double mean = 0.0;
    for (const auto& e : report.estimates) mean += e[j];
    mean /= m;
    double ss = 0.0;
    for (const auto& e : report.estimates)
      ss += (e[j] - mean) * (e[j] - mean);
    report.se[j] = m > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;

    std::vector<double> col;
    col.reserve(report.estimates.size());
    for (const auto& e : report.estimates) col.push_back(e[j]);
    std::sort(col.begin(), col.end());
    report.ci_lower[j] = percentile_type7(col, 0.025);
    report.ci_upper[j] = percentile_type7(col, 0.975);
  }
  return report;
}

}  // namespace evinlier
