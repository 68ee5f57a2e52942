// Command-line driver: gen, tune, run, plot, inspect.
//
// Exit codes: 0 success, 1 config or usage error, 2 runtime error.

#include <cstring>
#include <iostream>

#include "CLI11.hpp"

#include "csippp/harness/experiment.hpp"
#include "csippp/harness/plot.hpp"
#include "csippp/harness/synthetic.hpp"

using namespace csippp;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct CommonOpts {
  std::string config;
  std::vector<std::string> set;
  std::string out_dir;
};

nlohmann::json load_config(const CommonOpts& o) {
  nlohmann::json j = o.config.empty() ? nlohmann::json::object() : read_config_file(o.config);
  apply_overrides(j, o.set);
  if (!o.out_dir.empty()) j["output_dir"] = o.out_dir;
  return j;
}

int cmd_gen(const CommonOpts& o, const std::string& out) {
  ConfigReader r(load_config(o));
  SyntheticSpec spec;
  spec.count = r.get<std::size_t>("synthetic/count", 1000);
  spec.ns = r.get<Eigen::Index>("synthetic/ns", spec.ns);
  spec.nt = r.get<Eigen::Index>("synthetic/nt", spec.nt);
  spec.taps = r.get<Eigen::Index>("synthetic/taps", spec.taps);
  spec.decay = r.get<double>("synthetic/decay", spec.decay);
  const auto seed = r.get<std::uint64_t>("synthetic/seed", 1);
  const std::string path = out.empty() ? r.require<std::string>("dataset") : out;
  SeededRng rng(seed);
  const auto samples = generate_synthetic(rng, spec);
  save_dataset(samples, path);
  std::cout << "wrote " << samples.size() << " samples (" << spec.ns << "x" << spec.nt << ") to " << path << '\n';
  return kOk;
}

int cmd_experiment(const CommonOpts& o, RunMode mode) {
  ConfigReader r(load_config(o));
  const auto cfg = parse_experiment_config(r);
  const auto outcome = run_experiment(cfg, r.resolved(), mode, &std::cerr);
  std::cout << "outputs in " << cfg.output_dir << '\n';
  if (!outcome.all_ok()) {
    std::cerr << "one or more cells failed; see manifest.json\n";
    return kRuntimeError;
  }
  return kOk;
}

int cmd_plot(const std::string& results, const std::string& traces, const std::string& out_dir) {
  const auto out = plot_results(results, traces, out_dir);
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& f : out.files) std::cout << f << '\n';
  return kOk;
}

int cmd_inspect(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  auto starts_with = [&](const auto& magic) {
    return bytes.size() >= magic.size() && std::memcmp(bytes.data(), magic.data(), magic.size()) == 0;
  };
  if (starts_with(kDatasetMagic)) {
    const auto h = decode_dataset_header(bytes);
    std::cout << "CSID1 dataset\n  samples " << h.num_samples << "\n  Ns " << h.ns << "\n  Nt " << h.nt
              << "\n  dtype " << int(h.dtype) << "\n  payload bytes " << h.payload_bytes() << '\n';
    const auto samples = decode_dataset(bytes);
    if (!samples.empty() && h.ns >= 32) {
      double kept = 0.0;
      for (const auto& s : samples) kept += retained_energy(to_angular_delay(s), 32);
      std::cout << std::setprecision(6) << std::fixed << "  mean energy in first 32 delay rows " << kept / static_cast<double>(samples.size()) << '\n';
    }
    return kOk;
  }
  if (starts_with(kWeightsMagic)) {
    const auto model = decode_weights(bytes);
    std::cout << "PPPW1 denoiser\n  layers " << model.layers.size() << "\n  parameters " << model.parameter_count()
              << '\n';
    for (std::size_t i = 0; i < model.layers.size(); ++i) {
      const auto& l = model.layers[i];
      std::cout << "  [" << i << "] " << l.in_ch << " -> " << l.out_ch << " k" << l.kernel << ' '
                << (l.activation == Activation::relu ? "relu" : l.activation == Activation::tanh ? "tanh" : "linear")
                << '\n';
    }
    return kOk;
  }
  if (bytes.size() == ProjectionCode::kSerializedSize) {
    std::array<std::uint8_t, ProjectionCode::kSerializedSize> raw{};
    std::copy(bytes.begin(), bytes.end(), raw.begin());
    const auto code = ProjectionCode::deserialize(raw);
    std::cout << "projection code\n  seed " << code.seed() << "\n  M " << code.rows() << "\n  N " << code.cols()
              << "\n  method " << to_string(code.method()) << '\n';
    return kOk;
  }
  throw FormatError("unrecognized file format: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CSI feedback reconstruction with plug-and-play priors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CSIPPP_VERSION);

  CommonOpts opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", opts.config, "JSON config file");
    sub->add_option("--set", opts.set, "override a config value, key/path=value")->take_all();
  };

  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a synthetic CSID1 dataset");
  add_common(gen);
  gen->add_option("-o,--out", gen_out, "output dataset path (default: config 'dataset')");

  auto* tune_cmd = app.add_subcommand("tune", "grid-search solver parameters per (CR, bits) cell");
  add_common(tune_cmd);
  tune_cmd->add_option("-o,--out-dir", opts.out_dir, "output directory");

  auto* run = app.add_subcommand("run", "run the experiment sweep");
  add_common(run);
  run->add_option("-o,--out-dir", opts.out_dir, "output directory");

  std::string results, traces, plot_dir = "figures";
  auto* plot = app.add_subcommand("plot", "render SVG figures from results and traces CSV");
  plot->add_option("results", results, "results CSV")->required();
  plot->add_option("--traces", traces, "traces CSV for the convergence plot");
  plot->add_option("-o,--out-dir", plot_dir, "figure directory");

  std::string inspect_path;
  auto* inspect = app.add_subcommand("inspect", "describe a dataset, weights or projection code file");
  inspect->add_option("file", inspect_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*gen) return cmd_gen(opts, gen_out);
    if (*tune_cmd) return cmd_experiment(opts, RunMode::tune_only);
    if (*run) return cmd_experiment(opts, RunMode::run);
    if (*plot) return cmd_plot(results, traces, plot_dir);
    if (*inspect) return cmd_inspect(inspect_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
