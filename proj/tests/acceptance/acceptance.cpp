// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "csippp/harness/experiment.hpp"
#include "csippp/harness/synthetic.hpp"
#include "csippp/solver/omp.hpp"

using namespace csippp;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

RealVector gaussian_vector(SeededRng& rng, Eigen::Index n) {
  RealVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

RealVector sparse_vector(SeededRng& rng, Eigen::Index n, int k) {
  RealVector v = RealVector::Zero(n);
  for (int placed = 0; placed < k;) {
    const auto i = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    if (v(i) != 0.0) continue;
    v(i) = rng.normal();
    ++placed;
  }
  return v;
}

fs::path work_dir() {
  auto d = fs::temp_directory_path() / "csippp_acceptance";
  fs::create_directories(d);
  return d;
}

Verdict exact_inversion() {
  const Eigen::Index n = 2048;
  const RealMatrix a = generate_projection(2024, n, n, OrthoMethod::qr).matrix();
  SeededRng rng(1);
  const RealVector h = gaussian_vector(rng, n);
  const RealVector y = a * h;
  SolverConfig cfg;
  cfg.lambda = 1e-12;
  cfg.rho0 = 1e-10;
  cfg.max_iters = 1;
  cfg.init_sparsity = n / 4;
  const auto t0 = Clock::now();
  const auto res = solve(a, y, cfg, make_identity_denoiser());
  const double secs = seconds_since(t0);
  const double db = to_db(nmse(res.estimate, h));
  return {db < -80.0 && secs < 1.0 && res.trace.records.size() == 1,
          "N=2048 NMSE " + fmt("%.1f", db) + " dB in 1 iteration, " + fmt("%.3f", secs) + " s"};
}

Verdict sparse_recovery() {
  const auto t0 = Clock::now();
  const Eigen::Index n = 128, m = 64;
  const RealMatrix a = generate_projection(77, m, n, OrthoMethod::qr).matrix();
  SeededRng rng(2);
  std::vector<TuneCase> train;
  for (int i = 0; i < 20; ++i) {
    const RealVector h = sparse_vector(rng, n, 5);
    train.push_back({h, a * h});
  }
  SolverConfig base;
  base.max_iters = 50;
  const auto den = make_soft_threshold_denoiser(1.0);
  const auto tuned = tune(train, a, make_grid({2e-9, 5e-9, 2e-8}, {1e-8}, {1.3, 1.4}), base, den);

  int ppp_ok = 0, omp_ok = 0;
  const int total = 200;
  for (int i = 0; i < total; ++i) {
    const RealVector h = sparse_vector(rng, n, 5);
    const RealVector y = a * h;
    if ((omp_baseline(a, y, 5) - h).norm() <= 1e-8 * h.norm()) ++omp_ok;
    const auto res = solve(a, y, tuned.best, den);
    if (to_db(nmse(res.estimate, h)) < -40.0) ++ppp_ok;
  }
  const double secs = seconds_since(t0);
  return {ppp_ok >= 190 && omp_ok == total && secs < 30.0,
          std::to_string(ppp_ok) + "/200 below -40 dB (need 190), OMP exact " + std::to_string(omp_ok) +
              "/200, tuned lambda=" + fmt("%g", tuned.best.lambda) + " rho0=" + fmt("%g", tuned.best.rho0) +
              " alpha=" + fmt("%g", tuned.best.alpha) + ", " + fmt("%.1f", secs) + " s"};
}

Verdict z_update_correctness() {
  SeededRng rng(3);
  double worst_res = 0.0, worst_agree = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 32 + 16 * static_cast<Eigen::Index>(rng.below(6));
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    const auto method = trial % 2 ? OrthoMethod::svd : OrthoMethod::qr;
    const RealMatrix a = generate_projection(1000 + trial, m, n, method).matrix();
    const RealVector y = gaussian_vector(rng, m), h = gaussian_vector(rng, n);
    const double rho = std::pow(10.0, 8.0 * rng.uniform() - 4.0);
    const RealVector rhs = a.transpose() * y + rho * h;
    const RealVector zd = z_update(a, y, h, rho, ZPath::direct);
    const RealVector zw = z_update(a, y, h, rho, ZPath::woodbury);
    for (const RealVector* z : {&zd, &zw}) {
      const RealVector lhs = a.transpose() * (a * *z) + rho * *z;
      worst_res = std::max(worst_res, (lhs - rhs).norm() / rhs.norm());
    }
    worst_agree = std::max(worst_agree, (zw - zd).norm() / zd.norm());
  }
  return {worst_res < 1e-8 && worst_agree < 1e-8,
          "100 draws, worst residual " + fmt("%.2e", worst_res) + ", worst Woodbury/direct gap " +
              fmt("%.2e", worst_agree)};
}

Verdict transforms() {
  SeededRng rng(4);
  double worst = 0.0;
  for (auto [ns, nt] : {std::pair<Eigen::Index, Eigen::Index>{8, 4}, {256, 32}}) {
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexMatrix h = complex_gaussian_matrix(rng, ns, nt);
      const ComplexMatrix ad = to_angular_delay(h);
      const ComplexMatrix back = to_spatial_freq(ad);
      worst = std::max(worst, (back - h).norm() / h.norm());
      worst = std::max(worst, std::abs(ad.squaredNorm() - h.squaredNorm()) / h.squaredNorm());
      const ComplexMatrix again = to_angular_delay(to_spatial_freq(ad));
      worst = std::max(worst, (again - ad).norm() / ad.norm());
    }
  }
  return {worst <= 1e-10, "(8,4) and (256,32): worst roundtrip/Parseval error " + fmt("%.2e", worst)};
}

Verdict quantizer() {
  std::string detail;
  bool ok = true;
  for (int bits = 3; bits <= 6; ++bits) {
    QuantizerConfig q{200.0, bits, 1.5};
    std::uint32_t prev = 0;
    bool monotone = true, idempotent = true;
    double worst = 0.0;
    const int steps = 20001;
    for (int i = 0; i < steps; ++i) {
      const double x = -1.6 + 3.2 * i / (steps - 1);
      const auto code = quantize_one(x, q);
      if (i > 0 && code < prev) monotone = false;
      prev = code;
      if (std::abs(x) <= q.clip)
        worst = std::max(worst, std::abs(mu_law_compress(x, q) - mu_law_compress(dequantize_one(code, q), q)));
    }
    for (std::uint32_t c = 0; c < q.levels(); ++c)
      if (quantize_one(dequantize_one(c, q), q) != c) idempotent = false;
    // At a cell edge the error is exactly half a step; allow for rounding
    // in the log/exp evaluation of that tie.
    const double bound = std::ldexp(1.0, -bits);
    const bool cell_ok = monotone && idempotent && worst <= bound + 1e-12;
    ok = ok && cell_ok;
    detail += (detail.empty() ? "" : "; ") + std::string("B=") + std::to_string(bits) + " err-bound " +
              fmt("%+.1e", worst - bound) + (monotone ? "" : " NOT monotone") +
              (idempotent ? "" : " NOT idempotent");
  }
  return {ok, detail};
}

Verdict metric_identities() {
  SeededRng rng(5);
  const ComplexMatrix h = complex_gaussian_matrix(rng, 64, 8);
  const double cos = cosine_similarity(Complex(-2.5, 0.7) * h, h);
  const double zero_db = to_db(nmse(RealVector::Zero(100).eval(), gaussian_vector(rng, 100)));
  ComplexMatrix unit = complex_gaussian_matrix(rng, 64, 8);
  for (Eigen::Index i = 0; i < unit.rows(); ++i) unit.row(i) /= unit.row(i).norm();
  const double rate = achievable_rate(unit, unit, 10.0);
  const bool ok = std::abs(cos - 1.0) < 1e-12 && std::abs(zero_db) < 1e-12 && std::abs(rate - std::log2(11.0)) < 1e-9;
  return {ok, "CoS(c*h,h)=" + fmt("%.15f", cos) + ", NMSE(0)=" + fmt("%.3g", zero_db) + " dB, rate=" +
                  fmt("%.12f", rate) + " vs log2(11)=" + fmt("%.12f", std::log2(11.0))};
}

// Standard synthetic channel suite: 64 taps, decay 0.2, Ns=256, Nt=32.
fs::path channel_suite() {
  const auto path = work_dir() / "suite.csid";
  SeededRng rng(2025);
  save_dataset(generate_synthetic(rng, {60, 256, 32, 64, 0.2}), path);
  return path;
}

nlohmann::json suite_config(const fs::path& dataset, const fs::path& out) {
  return {{"dataset", dataset.string()},
          {"output_dir", out.string()},
          {"nd", 32},
          {"calib_samples", 30},
          {"eval_samples", 30},
          {"trace_samples", 30},
          {"seed", 7},
          {"solver", {{"max_iters", 10}}},
          {"denoiser", {{"kind", "soft"}, {"gain", 1.0}}}};
}

ExperimentOutcome run_json(const nlohmann::json& j) {
  ConfigReader reader(j);
  const auto cfg = parse_experiment_config(reader);
  return run_experiment(cfg, reader.resolved());
}

Verdict quantization_robustness(const fs::path& dataset) {
  auto j = suite_config(dataset, work_dir() / "quant");
  j["crs"] = {0.25};
  j["quant_bits"] = {0, 3};
  j["tuning"] = {{"lambdas", {1e-5, 1e-4, 1e-3, 1e-2}}, {"rho0s", {1e-4, 1e-2, 1.0}}, {"alphas", {1.2, 1.8}}};
  const auto out = run_json(j);
  if (!out.all_ok()) return {false, "cell failed: " + (out.cells[0].ok() ? out.cells[1].error : out.cells[0].error)};
  const double none = out.cells[0].report->nmse_db, b3 = out.cells[1].report->nmse_db;
  const double gap = std::abs(b3 - none);
  return {gap <= 1.0, "CR 1/4: NMSE none " + fmt("%.2f", none) + " dB, B=3 " + fmt("%.2f", b3) + " dB, gap " +
                          fmt("%.2f", gap) + " dB (limit 1.0)"};
}

Verdict convergence() {
  // Reads the traces emitted by the quantization run.
  const auto table = read_csv_file((work_dir() / "quant" / "traces.csv").string());
  const auto c_cell = table.column("bits"), c_sample = table.column("sample"), c_iter = table.column("iter"),
             c_nmse = table.column("nmse_db");
  std::map<std::pair<std::string, std::string>, std::map<int, double>> curves;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    curves[{r[c_cell], r[c_sample]}][static_cast<int>(parse_double(r[c_iter], table.line_numbers[i]))] =
        parse_double(r[c_nmse], table.line_numbers[i]);
  }
  int good = 0, total = 0;
  for (const auto& [key, curve] : curves) {
    ++total;
    const int last = curve.rbegin()->first;
    if (last <= 10 && curve.count(1) && curve.at(last) <= curve.at(1)) ++good;
  }
  const bool ok = total > 0 && good >= 0.95 * total;
  return {ok, std::to_string(good) + "/" + std::to_string(total) +
                  " traced samples with final NMSE <= iteration-1 NMSE within 10 iterations (need 95%)"};
}

Verdict one_for_all(const fs::path& dataset) {
  const auto weights = fs::path(CSIPPP_TEST_DATA_DIR) / "golden_denoiser.pppw1";
  std::string detail;
  bool ok = true;
  for (const std::string kind : {"soft", "cnn"}) {
    std::set<std::string> artifacts;
    int finite = 0, cells = 0;
    for (std::uint64_t seed : {7ULL, 8ULL}) {
      auto j = suite_config(dataset, work_dir() / ("ofa_" + kind + "_" + std::to_string(seed)));
      j["seed"] = seed;
      j["crs"] = {0.5, 0.25, 0.125};
      j["quant_bits"] = {0};
      j["eval_samples"] = kind == "cnn" ? 4 : 10;
      j["trace_samples"] = 0;
      j["solver"] = {{"lambda", 1e-3}, {"rho0", 1e-2}, {"alpha", 1.8}, {"max_iters", 10}};
      if (kind == "cnn") j["denoiser"] = {{"kind", "cnn"}, {"weights", weights.string()}};
      const auto out = run_json(j);
      const auto manifest = nlohmann::json::parse(std::ifstream(work_dir() / ("ofa_" + kind + "_" +
                                                                              std::to_string(seed)) / "manifest.json"));
      artifacts.insert(manifest["denoiser"].dump());
      if (manifest["retraining_steps"] != 0) ok = false;
      for (std::size_t k = 0; k < out.cells.size(); ++k) {
        ++cells;
        if (manifest["cells"][k]["retraining_steps"] != 0) ok = false;
        if (out.cells[k].ok() && std::isfinite(out.cells[k].report->nmse_db)) ++finite;
      }
    }
    ok = ok && finite == 6 && cells == 6 && artifacts.size() == 1;
    detail += (detail.empty() ? "" : "; ") + kind + ": " + std::to_string(finite) + "/6 cells finite, " +
              (artifacts.size() == 1 ? "one artifact" : "artifact changed");
  }
  return {ok, detail + ", retraining steps 0"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  fs::path dataset;
  const std::vector<Criterion> criteria{
      {"exact-inversion", exact_inversion},
      {"sparse-recovery", sparse_recovery},
      {"z-update", z_update_correctness},
      {"transforms", transforms},
      {"quantizer", quantizer},
      {"metric-identities", metric_identities},
      {"quantization-robustness", [&] {
         dataset = channel_suite();
         return quantization_robustness(dataset);
       }},
      {"convergence", convergence},
      {"one-for-all", [&] { return one_for_all(dataset); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS " : "FAIL ") << c.name << ": " << v.detail << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
