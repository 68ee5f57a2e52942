#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "csippp/denoise/denoiser.hpp"
#include "csippp/metrics/metrics.hpp"
#include "csippp/solver/init.hpp"
#include "csippp/solver/z_update.hpp"

namespace csippp {

enum class EstimateKind : std::uint8_t { z, h };

struct SolverConfig {
  double lambda = 2e-3;
  double rho0 = 1e-3;
  double alpha = 1.8;
  int max_iters = 10;
  Eigen::Index init_sparsity = 0;  // 0 selects M / 4
  double tol = 0.0;                // relative-change early stop, 0 disables
  ZPath z_path = ZPath::woodbury;
  EstimateKind estimate = EstimateKind::z;

  void validate(Eigen::Index m) const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("solver: lambda must be > 0");
    if (!(rho0 > 0.0) || !std::isfinite(rho0)) throw InvalidArgument("solver: rho0 must be > 0");
    if (!(alpha > 1.0) || !std::isfinite(alpha)) throw InvalidArgument("solver: alpha must be > 1");
    if (max_iters < 1) throw InvalidArgument("solver: max_iters must be >= 1");
    if (init_sparsity < 0 || init_sparsity > m) throw InvalidArgument("solver: need K <= M");
    if (!(tol >= 0.0)) throw InvalidArgument("solver: tol must be >= 0");
  }

  Eigen::Index sparsity_for(Eigen::Index m) const {
    return init_sparsity > 0 ? init_sparsity : std::max<Eigen::Index>(1, m / 4);
  }

  // rho at 1-based iteration t.
  double rho_at(int t) const { return rho0 * std::pow(alpha, t - 1); }
};

struct IterationRecord {
  int iter = 0;
  double rho = 0.0;
  double sigma = 0.0;
  double residual = 0.0;  // ||y - A z^t||_2
  std::optional<double> nmse;
};

struct SolverTrace {
  double init_residual = 0.0;
  std::optional<double> init_nmse;
  bool init_regularized = false;
  std::vector<IterationRecord> records;
};

struct SolveResult {
  RealVector estimate;
  RealVector h0;
  SolverTrace trace;
};

/// Plug-and-play HQS reconstruction. Starts from the support-restricted
/// least-squares estimate, then alternates the closed-form z-update with
/// the denoiser at sigma_t = sqrt(lambda / (2 rho_t)) and grows rho by alpha.
inline SolveResult solve(const RealMatrix& a, const RealVector& y, const SolverConfig& cfg,
                         const Denoiser& denoiser, const RealVector* truth = nullptr) {
  cfg.validate(a.rows());
  if (y.size() != a.rows()) throw InvalidArgument("solve: y length must equal M");
  if (truth && truth->size() != a.cols()) throw InvalidArgument("solve: truth length must equal N");

  auto init = init_support_ls(a, y, cfg.sparsity_for(a.rows()));
  SolveResult out;
  out.h0 = init.h0;
  out.trace.init_regularized = init.regularized;
  out.trace.init_residual = (y - a * init.h0).norm();
  if (truth) out.trace.init_nmse = nmse(init.h0, *truth);

  RealVector h = std::move(init.h0);
  RealVector z;
  for (int t = 1; t <= cfg.max_iters; ++t) {
    const double rho = cfg.rho_at(t);
    const double sigma = std::sqrt(cfg.lambda / (2.0 * rho));
    z = z_update(a, y, h, rho, cfg.z_path);
    if (!all_finite(z)) throw DivergenceError(t, "solve: non-finite z at iteration " + std::to_string(t));
    RealVector next = denoiser(z, sigma);
    if (!all_finite(next)) throw DivergenceError(t, "solve: non-finite h at iteration " + std::to_string(t));

    IterationRecord rec{t, rho, sigma, (y - a * z).norm(), std::nullopt};
    if (truth) rec.nmse = nmse(cfg.estimate == EstimateKind::z ? z : next, *truth);
    out.trace.records.push_back(rec);

    const double base = h.norm();
    const double change = (next - h).norm();
    h = std::move(next);
    if (cfg.tol > 0.0 && base > 0.0 && change / base < cfg.tol) break;
  }
  out.estimate = cfg.estimate == EstimateKind::z ? std::move(z) : std::move(h);
  return out;
}

/// CSV with header iter,rho,sigma,residual,nmse; nmse is empty when no
/// ground truth was supplied.
inline void write_trace_csv(std::ostream& os, const SolverTrace& trace, bool header = true) {
  if (header) os << "iter,rho,sigma,residual,nmse\n";
  const auto old = os.precision(17);
  for (const auto& r : trace.records) {
    os << r.iter << ',' << r.rho << ',' << r.sigma << ',' << r.residual << ',';
    if (r.nmse) os << *r.nmse;
    os << '\n';
  }
  os.precision(old);
}

}  // namespace csippp
