#pragma once

#include <limits>
#include <ostream>
#include <vector>

#include "csippp/core/parallel.hpp"
#include "csippp/solver/ppp.hpp"

namespace csippp {

struct TuneCase {
  RealVector truth;
  RealVector y;
};

struct GridPoint {
  double lambda;
  double rho0;
  double alpha;
};

struct TuneRow {
  GridPoint point;
  double mean_nmse = 0.0;  // linear; +inf when any sample diverged
  double mean_nmse_db = 0.0;
};

struct TuneResult {
  SolverConfig best;
  std::size_t best_index = 0;
  std::vector<TuneRow> rows;
};

/// Cartesian product, lambda outermost, alpha innermost.
inline std::vector<GridPoint> make_grid(const std::vector<double>& lambdas,
                                        const std::vector<double>& rho0s,
                                        const std::vector<double>& alphas) {
  std::vector<GridPoint> g;
  for (double l : lambdas)
    for (double r : rho0s)
      for (double al : alphas) g.push_back({l, r, al});
  return g;
}

/// Grid search for (lambda, rho0, alpha) minimizing mean NMSE over `cases`.
/// The first grid point wins ties.
inline TuneResult tune(const std::vector<TuneCase>& cases, const RealMatrix& a,
                       const std::vector<GridPoint>& grid, const SolverConfig& base,
                       const Denoiser& denoiser, unsigned threads = 0) {
  if (cases.empty()) throw InvalidArgument("tune: empty dataset");
  if (grid.empty()) throw InvalidArgument("tune: empty grid");
  TuneResult out;
  out.rows.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    SolverConfig cfg = base;
    cfg.lambda = grid[g].lambda;
    cfg.rho0 = grid[g].rho0;
    cfg.alpha = grid[g].alpha;
    cfg.validate(a.rows());
    std::vector<double> per(cases.size());
    parallel_for(cases.size(), [&](std::size_t i) {
      try {
        const auto res = solve(a, cases[i].y, cfg, denoiser);
        per[i] = nmse(res.estimate, cases[i].truth);
      } catch (const DivergenceError&) {
        per[i] = std::numeric_limits<double>::infinity();
      }
    }, threads);
    double sum = 0.0;
    for (double v : per) sum += v;
    const double mean = sum / static_cast<double>(cases.size());
    out.rows[g] = {grid[g], mean, to_db(mean)};
  }
  for (std::size_t g = 1; g < grid.size(); ++g)
    if (out.rows[g].mean_nmse < out.rows[out.best_index].mean_nmse) out.best_index = g;
  out.best = base;
  out.best.lambda = grid[out.best_index].lambda;
  out.best.rho0 = grid[out.best_index].rho0;
  out.best.alpha = grid[out.best_index].alpha;
  return out;
}

inline void write_tune_report(std::ostream& os, const TuneResult& r) {
  os << "lambda,rho0,alpha,mean_nmse_db,selected\n";
  const auto old = os.precision(10);
  for (std::size_t g = 0; g < r.rows.size(); ++g) {
    const auto& row = r.rows[g];
    os << row.point.lambda << ',' << row.point.rho0 << ',' << row.point.alpha << ','
       << row.mean_nmse_db << ',' << (g == r.best_index ? 1 : 0) << '\n';
  }
  os.precision(old);
}

}  // namespace csippp
