#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "csippp/denoise/denoiser.hpp"
#include "csippp/denoise/weights_io.hpp"
#include "csippp/encoder/encoder.hpp"
#include "csippp/harness/config.hpp"
#include "csippp/harness/dataset.hpp"
#include "csippp/harness/text.hpp"
#include "csippp/metrics/metrics.hpp"
#include "csippp/solver/ppp.hpp"
#include "csippp/solver/tune.hpp"
#include "csippp/version.hpp"

namespace csippp {

struct DenoiserSpec {
  std::string kind = "soft";  // soft | cnn | identity
  double gain = 1.0;
  std::string weights;
};

struct TuningGrid {
  std::vector<double> lambdas;
  std::vector<double> rho0s;
  std::vector<double> alphas;

  bool enabled() const { return !lambdas.empty(); }
};

struct ExperimentConfig {
  std::string dataset;
  std::string output_dir = "out";
  Eigen::Index nd = 32;
  std::vector<double> crs{0.25};
  std::vector<int> bits{0};  // 0 = unquantized feedback
  double mu = 200.0;
  std::uint64_t seed = 1;
  OrthoMethod projection = OrthoMethod::qr;
  std::size_t calib_samples = 50;  // leading samples: tuning grid and quantizer clip
  std::size_t eval_samples = 0;    // following samples; 0 = all the rest
  SolverConfig solver;
  TuningGrid grid;
  DenoiserSpec denoiser;
  unsigned threads = 0;
  std::size_t trace_samples = 20;
  std::string nmse_domain = "truncated";  // truncated | full
};

namespace detail {

inline std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ", ") + p;
  return out;
}

}  // namespace detail

/// Pulls an ExperimentConfig out of the reader. Unknown keys, bad values
/// and missing files raise ConfigError.
inline ExperimentConfig parse_experiment_config(ConfigReader& r) {
  ExperimentConfig c;
  c.dataset = r.require<std::string>("dataset");
  c.output_dir = r.get<std::string>("output_dir", c.output_dir);
  c.nd = r.get<Eigen::Index>("nd", c.nd);
  c.crs = r.get<std::vector<double>>("crs", c.crs);
  c.bits = r.get<std::vector<int>>("quant_bits", c.bits);
  c.mu = r.get<double>("mu", c.mu);
  c.seed = r.get<std::uint64_t>("seed", c.seed);
  try {
    c.projection = ortho_method_from_string(r.get<std::string>("projection", "qr"));
  } catch (const Error& e) {
    throw ConfigError(std::string("projection: ") + e.what());
  }
  c.calib_samples = r.get<std::size_t>("calib_samples", c.calib_samples);
  c.eval_samples = r.get<std::size_t>("eval_samples", c.eval_samples);
  c.threads = r.get<unsigned>("threads", c.threads);
  c.trace_samples = r.get<std::size_t>("trace_samples", c.trace_samples);
  c.nmse_domain = r.get<std::string>("nmse_domain", c.nmse_domain);

  auto& s = c.solver;
  s.lambda = r.get<double>("solver/lambda", s.lambda);
  s.rho0 = r.get<double>("solver/rho0", s.rho0);
  s.alpha = r.get<double>("solver/alpha", s.alpha);
  s.max_iters = r.get<int>("solver/max_iters", s.max_iters);
  s.init_sparsity = r.get<Eigen::Index>("solver/init_sparsity", s.init_sparsity);
  s.tol = r.get<double>("solver/tol", s.tol);
  const auto z_path = r.get<std::string>("solver/z_path", "woodbury");
  if (z_path != "woodbury" && z_path != "direct") throw ConfigError("solver/z_path must be woodbury or direct");
  s.z_path = z_path == "direct" ? ZPath::direct : ZPath::woodbury;
  const auto estimate = r.get<std::string>("solver/estimate", "z");
  if (estimate != "z" && estimate != "h") throw ConfigError("solver/estimate must be z or h");
  s.estimate = estimate == "h" ? EstimateKind::h : EstimateKind::z;

  if (r.has("tuning")) {
    c.grid.lambdas = r.require<std::vector<double>>("tuning/lambdas");
    c.grid.rho0s = r.require<std::vector<double>>("tuning/rho0s");
    c.grid.alphas = r.require<std::vector<double>>("tuning/alphas");
    if (c.grid.lambdas.empty() || c.grid.rho0s.empty() || c.grid.alphas.empty())
      throw ConfigError("tuning: every grid axis needs at least one value");
  }

  // Generator settings may share the file; they are kept as provenance.
  if (r.has("synthetic")) r.note("synthetic", r.require<nlohmann::json>("synthetic"));

  c.denoiser.kind = r.get<std::string>("denoiser/kind", c.denoiser.kind);
  if (c.denoiser.kind == "soft") {
    c.denoiser.gain = r.get<double>("denoiser/gain", c.denoiser.gain);
    if (!(c.denoiser.gain > 0.0)) throw ConfigError("denoiser/gain must be > 0");
  } else if (c.denoiser.kind == "cnn") {
    c.denoiser.weights = r.require<std::string>("denoiser/weights");
    if (!std::filesystem::exists(c.denoiser.weights))
      throw ConfigError("denoiser weights '" + c.denoiser.weights + "' not found");
  } else if (c.denoiser.kind != "identity") {
    throw ConfigError("denoiser/kind must be soft, cnn or identity");
  }

  if (const auto unused = r.unused(); !unused.empty())
    throw ConfigError("unknown config key(s): " + detail::join(unused));

  if (!std::filesystem::exists(c.dataset)) throw ConfigError("dataset '" + c.dataset + "' not found");
  if (c.nd < 1) throw ConfigError("nd must be >= 1");
  if (c.crs.empty()) throw ConfigError("crs must not be empty");
  for (double cr : c.crs)
    if (!(cr > 0.0 && cr <= 1.0)) throw ConfigError("every CR must lie in (0, 1]");
  if (c.bits.empty()) throw ConfigError("quant_bits must not be empty (use 0 for none)");
  bool quantized = false;
  for (int b : c.bits) {
    if (b != 0 && (b < 2 || b > 16)) throw ConfigError("quant_bits entries must be 0 or in [2, 16]");
    quantized = quantized || b != 0;
  }
  if (!(c.mu > 0.0)) throw ConfigError("mu must be > 0");
  if ((quantized || c.grid.enabled()) && c.calib_samples == 0)
    throw ConfigError("calib_samples must be > 0 when quantizing or tuning");
  if (c.nmse_domain != "truncated" && c.nmse_domain != "full")
    throw ConfigError("nmse_domain must be truncated or full");
  try {
    s.validate(std::numeric_limits<Eigen::Index>::max());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

/// Applies "path=value" overrides; the value is parsed as JSON when it can
/// be, otherwise taken as a string.
inline void apply_overrides(nlohmann::json& root, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + o + "' must look like key=value");
    const std::string key = o.substr(0, eq);
    const std::string text = o.substr(eq + 1);
    nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    root[nlohmann::json::json_pointer("/" + key)] = value;
  }
}

inline nlohmann::json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false, true);
  if (j.is_discarded()) throw ConfigError("config '" + path + "' is not valid JSON");
  return j;
}

inline std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

struct CellResult {
  double cr = 0.0;
  Eigen::Index m = 0;
  int bits = 0;
  std::optional<double> clip;
  SolverConfig solver;
  std::optional<TuneResult> tuning;
  std::optional<MetricsReport> report;
  std::string error;

  bool ok() const { return error.empty(); }
};

struct ExperimentOutcome {
  std::string method;
  std::vector<CellResult> cells;
  nlohmann::json manifest;

  bool all_ok() const {
    for (const auto& c : cells)
      if (!c.ok()) return false;
    return true;
  }
};

enum class RunMode { run, tune_only };

inline std::string bits_label(int bits) { return bits == 0 ? "none" : std::to_string(bits); }

inline constexpr const char* kResultsHeader = "method,cr,bits,nmse_db,cos,rate_0db,rate_10db,rate_20db,samples";
inline constexpr const char* kTracesHeader = "method,cr,bits,sample,iter,rho,sigma,residual,nmse_db";

inline void write_results_csv(std::ostream& os, const ExperimentOutcome& out) {
  os << kResultsHeader << '\n';
  for (const auto& c : out.cells) {
    os << out.method << ',' << format_double(c.cr) << ',' << bits_label(c.bits) << ',';
    if (c.report) {
      const auto& r = *c.report;
      os << format_double(r.nmse_db) << ',' << format_double(r.cos);
      for (double snr : default_rate_snrs_db()) os << ',' << format_double(r.rate_bps_hz.at(snr));
      os << ',' << r.sample_count << '\n';
    } else {
      os << "nan,nan,nan,nan,nan,0\n";
    }
  }
}

inline Denoiser build_denoiser(const DenoiserSpec& spec, Eigen::Index nd, Eigen::Index nt,
                               nlohmann::json& info) {
  info["kind"] = spec.kind;
  if (spec.kind == "identity") return make_identity_denoiser();
  if (spec.kind == "soft") {
    info["gain"] = spec.gain;
    return make_soft_threshold_denoiser(spec.gain);
  }
  const auto bytes = read_file_bytes(spec.weights);
  auto model = std::make_shared<const DenoiserModel>(decode_weights(bytes));
  info["weights"] = spec.weights;
  info["weights_fnv1a64"] = hex(fnv1a64(bytes));
  info["parameters"] = model->parameter_count();
  return make_cnn_denoiser(std::move(model), nd, nt, spec.weights);
}

namespace detail {

struct PreparedSample {
  RealVector h;             // vectorized truncated, normalized channel
  double scale = 1.0;
  const ComplexMatrix* sf;  // true spatial-frequency channel
  ComplexMatrix full_ad;    // only filled for the full-domain NMSE
};

inline nlohmann::json solver_json(const SolverConfig& s, Eigen::Index m) {
  return {{"lambda", s.lambda},       {"rho0", s.rho0},
          {"alpha", s.alpha},         {"max_iters", s.max_iters},
          {"init_sparsity", s.sparsity_for(m)},
          {"tol", s.tol},
          {"z_path", s.z_path == ZPath::direct ? "direct" : "woodbury"},
          {"estimate", s.estimate == EstimateKind::h ? "h" : "z"}};
}

}  // namespace detail

/// Runs every (CR, bits) cell and writes results.csv, traces.csv,
/// one tune_*.csv per tuned cell and manifest.json into cfg.output_dir.
/// A failing cell is recorded and the remaining cells still run.
/// In tune_only mode only the tuning reports and manifest are written.
inline ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const nlohmann::json& resolved_config,
                                        RunMode mode = RunMode::run, std::ostream* log = nullptr) {
  namespace fs = std::filesystem;
  const auto samples = load_dataset(cfg.dataset);
  if (samples.size() <= cfg.calib_samples)
    throw InvalidArgument("dataset has " + std::to_string(samples.size()) + " samples, need more than calib_samples = " +
                          std::to_string(cfg.calib_samples));
  const std::size_t ns = static_cast<std::size_t>(samples[0].spatial_freq.rows());
  const Eigen::Index nt = samples[0].spatial_freq.cols();
  if (cfg.nd > static_cast<Eigen::Index>(ns)) throw InvalidArgument("nd exceeds Ns");
  const std::size_t calib_end = cfg.calib_samples;
  const std::size_t eval_end =
      cfg.eval_samples == 0 ? samples.size() : std::min(samples.size(), calib_end + cfg.eval_samples);
  const bool full_domain = cfg.nmse_domain == "full";

  std::vector<detail::PreparedSample> prepared(eval_end);
  parallel_for(eval_end, [&](std::size_t i) {
    const ComplexMatrix ad = to_angular_delay(samples[i]);
    const TruncatedChannel tc = normalize(truncate_delay(ad, cfg.nd), static_cast<Eigen::Index>(ns));
    prepared[i].h = vectorize(tc).values;
    prepared[i].scale = tc.scale;
    prepared[i].sf = &samples[i].spatial_freq;
    if (full_domain) prepared[i].full_ad = ad;
  }, cfg.threads);

  ExperimentOutcome out;
  nlohmann::json denoiser_info;
  const Denoiser denoiser = build_denoiser(cfg.denoiser, cfg.nd, nt, denoiser_info);
  out.method = "ppp-" + denoiser.kind();
  const Eigen::Index n = 2 * cfg.nd * nt;

  fs::create_directories(cfg.output_dir);
  std::ostringstream traces;
  traces << kTracesHeader << '\n';

  for (double cr : cfg.crs) {
    for (int bits : cfg.bits) {
      CellResult cell;
      cell.cr = cr;
      cell.bits = bits;
      cell.solver = cfg.solver;
      try {
        cell.m = rows_for_ratio(cr, n);
        cfg.solver.validate(cell.m);
        const ProjectionCode code = generate_projection(cfg.seed, cell.m, n, cfg.projection);
        const RealMatrix& a = code.matrix();

        std::optional<QuantizerConfig> quant;
        if (bits != 0) {
          double clip = 0.0;
          for (std::size_t i = 0; i < calib_end; ++i)
            clip = std::max(clip, compress(code, prepared[i].h).values.cwiseAbs().maxCoeff());
          if (!(clip > 0.0)) throw DegenerateSample("calibration feedback is identically zero");
          quant = QuantizerConfig{cfg.mu, bits, clip};
          quant->validate();
          cell.clip = clip;
        }
        auto feedback = [&](std::size_t i) {
          Feedback f = compress(code, prepared[i].h);
          if (quant) f = quantize_feedback(f, *quant);
          return f.values;
        };

        if (cfg.grid.enabled()) {
          std::vector<TuneCase> cases(calib_end);
          for (std::size_t i = 0; i < calib_end; ++i) cases[i] = {prepared[i].h, feedback(i)};
          cell.tuning = tune(cases, a, make_grid(cfg.grid.lambdas, cfg.grid.rho0s, cfg.grid.alphas), cfg.solver,
                             denoiser, cfg.threads);
          cell.solver = cell.tuning->best;
          std::ofstream rep(fs::path(cfg.output_dir) /
                            ("tune_cr" + format_double(cr) + "_b" + bits_label(bits) + ".csv"));
          write_tune_report(rep, *cell.tuning);
        }

        if (mode == RunMode::run) {
          const std::size_t count = eval_end - calib_end;
          if (count == 0) throw InvalidArgument("no evaluation samples");
          struct PerSample {
            double nmse = 0.0;
            double cos = 0.0;
            std::map<double, double> rates;
            SolverTrace trace;
          };
          std::vector<PerSample> per(count);
          parallel_for(count, [&](std::size_t k) {
            const auto& ps = prepared[calib_end + k];
            const auto res = solve(a, feedback(calib_end + k), cell.solver, denoiser, &ps.h);
            const ComplexMatrix est = devectorize(res.estimate, cfg.nd, nt);
            const ComplexMatrix est_full = zero_pad_delay(denormalize(est, ps.scale), static_cast<Eigen::Index>(ns));
            const ComplexMatrix est_sf = to_spatial_freq(est_full);
            per[k].nmse = full_domain ? nmse(est_full, ps.full_ad) : nmse(res.estimate, ps.h);
            per[k].cos = cosine_similarity(est_sf, *ps.sf);
            for (double snr : default_rate_snrs_db()) per[k].rates[snr] = achievable_rate(est_sf, *ps.sf, snr);
            if (k < cfg.trace_samples) per[k].trace = res.trace;
          }, cfg.threads);

          MetricsAccumulator acc;
          for (const auto& p : per) acc.add(p.nmse, p.cos, p.rates);
          cell.report = acc.report();

          for (std::size_t k = 0; k < std::min(count, cfg.trace_samples); ++k) {
            const auto& t = per[k].trace;
            const std::string prefix = out.method + ',' + format_double(cr) + ',' + bits_label(bits) + ',' +
                                       std::to_string(calib_end + k) + ',';
            traces << prefix << "0,,," << format_double(t.init_residual) << ','
                   << format_double(to_db(*t.init_nmse)) << '\n';
            for (const auto& rec : t.records)
              traces << prefix << rec.iter << ',' << format_double(rec.rho) << ',' << format_double(rec.sigma) << ','
                     << format_double(rec.residual) << ',' << format_double(to_db(*rec.nmse)) << '\n';
          }
        }
      } catch (const std::exception& e) {
        cell.error = e.what();
        cell.report.reset();
      }
      if (log) {
        *log << "cr=" << format_double(cr) << " bits=" << bits_label(bits) << ": ";
        if (!cell.ok())
          *log << "error: " << cell.error;
        else if (cell.report)
          *log << "nmse " << format_double(cell.report->nmse_db) << " dB";
        else
          *log << "tuned lambda=" << cell.solver.lambda << " rho0=" << cell.solver.rho0 << " alpha=" << cell.solver.alpha;
        *log << '\n';
      }
      out.cells.push_back(std::move(cell));
    }
  }

  nlohmann::json m;
  m["tool"] = "csippp";
  m["version"] = CSIPPP_VERSION;
  m["mode"] = mode == RunMode::run ? "run" : "tune";
  m["config"] = resolved_config;
  m["dataset"] = {{"path", cfg.dataset},
                  {"num_samples", samples.size()},
                  {"ns", ns},
                  {"nt", nt},
                  {"calibration", {0, calib_end}},
                  {"evaluation", {calib_end, eval_end}}};
  m["denoiser"] = denoiser_info;
  m["method"] = out.method;
  m["retraining_steps"] = 0;
  m["cells"] = nlohmann::json::array();
  for (const auto& c : out.cells) {
    nlohmann::json j;
    j["cr"] = c.cr;
    j["bits"] = c.bits;
    j["m"] = c.m;
    j["n"] = n;
    j["projection"] = {{"seed", cfg.seed}, {"method", std::string(to_string(cfg.projection))}};
    if (c.clip) j["clip"] = *c.clip;
    j["tuned"] = c.tuning.has_value();
    j["solver"] = detail::solver_json(c.solver, std::max<Eigen::Index>(c.m, 1));
    j["retraining_steps"] = 0;
    j["status"] = c.ok() ? "ok" : "error";
    if (!c.ok()) j["error"] = c.error;
    if (c.report) {
      j["nmse_db"] = format_double(c.report->nmse_db);
      j["samples"] = c.report->sample_count;
    }
    m["cells"].push_back(j);
  }
  out.manifest = m;

  {
    std::ofstream mf(fs::path(cfg.output_dir) / "manifest.json");
    mf << m.dump(2) << '\n';
  }
  if (mode == RunMode::run) {
    std::ofstream rf(fs::path(cfg.output_dir) / "results.csv");
    write_results_csv(rf, out);
    std::ofstream tf(fs::path(cfg.output_dir) / "traces.csv");
    tf << traces.str();
  }
  return out;
}

}  // namespace csippp
