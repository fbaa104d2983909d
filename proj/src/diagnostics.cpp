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

#include "evinlier/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "evinlier/parallel.hpp"
#include "evinlier/specfun.hpp"

namespace evinlier {

namespace {

constexpr double kAdClamp = 1e-12;

}  // namespace

GofStatistics gof_statistics(const Dataset& data,
                             const std::function<double(double)>& fitted_cdf) {
  const std::size_t n = data.n();
  if (n < 8)
    throw std::invalid_argument("gof_statistics: need at least 8 points");
  const auto& x = data.sorted();
  const double dn = static_cast<double>(n);

  std::vector<double> f(n);
  GofStatistics out;
  for (std::size_t i = 0; i < n; ++i) {
    double v = fitted_cdf(x[i]);
    if (v < kAdClamp) {
      v = kAdClamp;
      out.clamped = true;
    } else if (v > 1.0 - kAdClamp) {
      v = 1.0 - kAdClamp;
      out.clamped = true;
    }
    f[i] = v;
  }

  double d = 0.0, w2 = 0.0, a2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double di = static_cast<double>(i + 1);
    d = std::max(d, std::max(di / dn - f[i], f[i] - (di - 1.0) / dn));
    const double c = f[i] - (2.0 * di - 1.0) / (2.0 * dn);
    w2 += c * c;
    a2 += (2.0 * di - 1.0) * (std::log(f[i]) + std::log1p(-f[n - 1 - i]));
  }
  out.ks = d;
  out.cvm = w2 + 1.0 / (12.0 * dn);
  out.ad = -dn - a2 / dn;
  return out;
}

double naic(double loglik, int k, std::size_t n) {
  if (n == 0) throw std::invalid_argument("naic: n must be positive");
  return (-2.0 * loglik + 2.0 * static_cast<double>(k)) /
         static_cast<double>(n);
}

PValues bootstrap_pvalue(
    const GofStatistics& observed,
    const std::function<std::vector<double>(std::uint64_t)>& simulate,
    const std::function<std::optional<GofStatistics>(const Dataset&)>&
        fit_stats,
    int B, std::uint64_t seed, int threads) {
  if (B < 100)
    throw std::invalid_argument("bootstrap_pvalue: B must be >= 100");

  std::vector<std::optional<GofStatistics>> boot(static_cast<std::size_t>(B));
  parallel_for(static_cast<std::size_t>(B), threads, [&](std::size_t r) {
    try {
      const Dataset replicate(
          simulate(seed + static_cast<std::uint64_t>(r)));
      boot[r] = fit_stats(replicate);
    } catch (const std::exception&) {
      boot[r] = std::nullopt;
    }
  });

  PValues p;
  int n_ok = 0;
  int ge_ad = 0, ge_cvm = 0, ge_ks = 0;
  for (const auto& s : boot) {
    if (!s) {
      ++p.n_failed;
      continue;
    }
    ++n_ok;
    if (s->ad >= observed.ad) ++ge_ad;
    if (s->cvm >= observed.cvm) ++ge_cvm;
    if (s->ks >= observed.ks) ++ge_ks;
  }
  if (p.n_failed > B / 5) {
    std::ostringstream msg;
    msg << "bootstrap_pvalue: " << p.n_failed << " of " << B
        << " bootstrap refits failed (> 20%)";
    throw std::runtime_error(msg.str());
  }
  p.ad = (1.0 + ge_ad) / (n_ok + 1.0);
  p.cvm = (1.0 + ge_cvm) / (n_ok + 1.0);
  p.ks = (1.0 + ge_ks) / (n_ok + 1.0);
  return p;
}

GofReport gof_bootstrap(const Dataset& data, ModelKind kind, int B,
                        std::uint64_t seed, const FitOptions& options,
                        int threads) {
  GofReport report;
  report.B = B;
  report.fit = fit_model(data, kind, options);
  const FitResult& fit = report.fit;
  report.observed = gof_statistics(
      data, [&](double x) { return model_cdf(x, fit); });
  report.naic = naic(fit.loglik, fit.parameter_count, data.n());

  const std::size_t n = data.n();
  const PValues p = bootstrap_pvalue(
      report.observed,
      [&](std::uint64_t s) { return sample_fit(fit, n, s); },
      [&](const Dataset& replicate) -> std::optional<GofStatistics> {
        const FitResult refit =
            refit_from(replicate, kind, fit.theta, options);
        if (!refit.converged) return std::nullopt;
        return gof_statistics(
            replicate, [&](double x) { return model_cdf(x, refit); });
      },
      B, seed, threads);
  report.p_ad = p.ad;
  report.p_cvm = p.cvm;
  report.p_ks = p.ks;
  report.n_failed = p.n_failed;
  return report;
}

DiagnosticCurve mean_excess_curve(std::span<const double> data,
                                  std::span<const double> thresholds,
                                  std::size_t min_exceedances) {
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());

  DiagnosticCurve curve;
  curve.kind = "mean_excess";
  for (double t : thresholds) {
    const auto first = std::upper_bound(sorted.begin(), sorted.end(), t);
    const std::size_t m = static_cast<std::size_t>(sorted.end() - first);
    if (m < min_exceedances) {
      curve.omitted.push_back(t);
      continue;
    }
    double mean = 0.0;
    for (auto it = first; it != sorted.end(); ++it) mean += *it - t;
    mean /= static_cast<double>(m);
    double ss = 0.0;
    for (auto it = first; it != sorted.end(); ++it)
      ss += (*it - t - mean) * (*it - t - mean);
    const double se =
        m > 1 ? std::sqrt(ss / static_cast<double>(m - 1) /
                          static_cast<double>(m))
              : 0.0;
    const double z = normal_quantile(0.975);
    curve.abscissa.push_back(t);
    curve.ordinate.push_back(mean);
    curve.ci_lower.push_back(mean - z * se);
    curve.ci_upper.push_back(mean + z * se);
  }
  return curve;
}

StabilityCurves stability_curves(std::span<const double> data,
                                 std::span<const double> thresholds,
                                 std::size_t min_exceedances) {
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());

  StabilityCurves out;
  out.sigma_star.kind = "stability_sigma";
  out.xi.kind = "stability_xi";
  const double z = normal_quantile(0.975);

  for (double t : thresholds) {
    const auto first = std::upper_bound(sorted.begin(), sorted.end(), t);
    const std::size_t m = static_cast<std::size_t>(sorted.end() - first);
    if (m < min_exceedances) {
      out.sigma_star.omitted.push_back(t);
      out.xi.omitted.push_back(t);
      continue;
    }
    std::vector<double> excesses;
    excesses.reserve(m);
    for (auto it = first; it != sorted.end(); ++it) excesses.push_back(*it - t);
    const GpdFit fit = fit_gpd_excesses(excesses);
    if (!fit.converged) {
      out.sigma_star.omitted.push_back(t);
      out.xi.omitted.push_back(t);
      continue;
    }

    // Asymptotic covariance of (sigma, xi): (1+xi)/m [[2 sigma^2, -sigma],
    // [-sigma, 1+xi]]; delta method for sigma* = sigma - xi t.
    const double dm = static_cast<double>(m);
    const double opx = 1.0 + fit.xi;
    const double var_sigma = 2.0 * fit.sigma * fit.sigma * opx / dm;
    const double var_xi = opx * opx / dm;
    const double cov = -fit.sigma * opx / dm;
    const double sigma_star = fit.sigma - fit.xi * t;
    const double var_star =
        var_sigma + t * t * var_xi - 2.0 * t * cov;
    const double se_star = var_star > 0.0 ? std::sqrt(var_star) : 0.0;
    const double se_xi = std::sqrt(var_xi);

    out.sigma_star.abscissa.push_back(t);
    out.sigma_star.ordinate.push_back(sigma_star);
    out.sigma_star.ci_lower.push_back(sigma_star - z * se_star);
    out.sigma_star.ci_upper.push_back(sigma_star + z * se_star);
    out.xi.abscissa.push_back(t);
    out.xi.ordinate.push_back(fit.xi);
    out.xi.ci_lower.push_back(fit.xi - z * se_xi);
    out.xi.ci_upper.push_back(fit.xi + z * se_xi);
  }
  return out;
}

DiagnosticCurve pickands_curve(std::span<const double> data,
                               std::span<const std::size_t> k_values) {
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  DiagnosticCurve curve;
  curve.kind = "pickands";
  for (std::size_t k : k_values) {
    if (k < 1 || 4 * k > n) {
      curve.omitted.push_back(static_cast<double>(k));
      continue;
    }
    const double xk = sorted[n - k];        // X_(n-k+1)
    const double x2k = sorted[n - 2 * k];   // X_(n-2k+1)
    const double x4k = sorted[n - 4 * k];   // X_(n-4k+1)
    const double num = xk - x2k;
    const double den = x2k - x4k;
    if (!(den > 0.0) || !(num > 0.0)) {
      curve.omitted.push_back(static_cast<double>(k));
      continue;
    }
    curve.abscissa.push_back(static_cast<double>(k));
    curve.ordinate.push_back(std::log(num / den) / std::log(2.0));
  }
  return curve;
}

ReturnLevelCurve return_levels(const FevimmParams& theta,
                               std::span<const double> periods) {
  theta.validate();
  ReturnLevelCurve curve;
  for (double t : periods) {
    if (!(t > 1.0))
      throw std::invalid_argument("return_levels: periods must exceed 1");
    const double p = 1.0 - 1.0 / t;
    curve.periods.push_back(t);
    if (p <= theta.phi1) {
      curve.levels.push_back(0.0);
      curve.inside_atom.push_back(true);
    } else {
      curve.levels.push_back(quantile(p, theta));
      curve.inside_atom.push_back(false);
    }
  }
  return curve;
}

void add_return_level_bands(ReturnLevelCurve& curve, const FitResult& fit,
                            std::size_t n, int B, std::uint64_t seed,
                            const FitOptions& options, int threads) {
  if (B < 100)
    throw std::invalid_argument("add_return_level_bands: B must be >= 100");
  const std::size_t np = curve.periods.size();
  std::vector<std::vector<double>> levels(static_cast<std::size_t>(B));
  std::vector<char> ok(static_cast<std::size_t>(B), 0);

  parallel_for(static_cast<std::size_t>(B), threads, [&](std::size_t r) {
    try {
      const Dataset boot(
          sample_fit(fit, n, seed + static_cast<std::uint64_t>(r)));
      const FitResult refit = refit_from(boot, fit.model, fit.theta, options);
      if (!refit.converged) return;
      std::vector<double> lv(np);
      for (std::size_t i = 0; i < np; ++i) {
        const double p = 1.0 - 1.0 / curve.periods[i];
        if (fit.model == ModelKind::Fevimm) {
          lv[i] = p <= refit.theta.phi1 ? 0.0 : quantile(p, refit.theta);
        } else if (fit.model == ModelKind::Fevmm) {
          lv[i] = fevmm_quantile(p, refit.theta);
        } else {
          lv[i] = evmm_quantile(p, refit.evmm());
        }
      }
      levels[r] = std::move(lv);
      ok[r] = 1;
    } catch (const std::exception&) {
    }
  });

  int n_ok = 0;
  for (char c : ok) n_ok += c;
  if (B - n_ok > B / 5)
    throw std::runtime_error(
        "add_return_level_bands: more than 20% of refits failed");

  curve.ci_lower.assign(np, 0.0);
  curve.ci_upper.assign(np, 0.0);
  for (std::size_t i = 0; i < np; ++i) {
    std::vector<double> col;
    col.reserve(static_cast<std::size_t>(n_ok));
    for (std::size_t r = 0; r < levels.size(); ++r)
      if (ok[r]) col.push_back(levels[r][i]);
    std::sort(col.begin(), col.end());
    const double h = (static_cast<double>(col.size()) - 1.0);
    auto pct = [&](double p) {
      const double hp = h * p;
      const auto lo = static_cast<std::size_t>(hp);
      if (lo + 1 >= col.size()) return col.back();
      return col[lo] + (hp - static_cast<double>(lo)) * (col[lo + 1] - col[lo]);
    };
    curve.ci_lower[i] = pct(0.025);
    curve.ci_upper[i] = pct(0.975);
  }
}

}  // namespace evinlier
