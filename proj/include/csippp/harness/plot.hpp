#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "csippp/harness/text.hpp"

namespace csippp {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Figure {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log2_x = false;
  std::vector<PlotSeries> series;

  std::size_t point_count() const {
    std::size_t n = 0;
    for (const auto& s : series) n += s.x.size();
    return n;
  }
  bool empty() const { return point_count() == 0; }
};

inline nlohmann::json figure_data(const Figure& f) {
  nlohmann::json j;
  j["title"] = f.title;
  j["x_label"] = f.x_label;
  j["y_label"] = f.y_label;
  j["series"] = nlohmann::json::array();
  for (const auto& s : f.series) j["series"].push_back({{"name", s.name}, {"x", s.x}, {"y", s.y}});
  return j;
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
  if (hi <= lo) hi = lo + 1.0;
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0})
    if (raw <= f * mag) {
      step = f * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::floor(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(v);
  return t;
}

inline std::string tick_label(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << (std::abs(v) < 1e-12 ? 0.0 : v);
  return os.str();
}

inline std::string cr_label(double cr) {
  const double inv = 1.0 / cr;
  if (std::abs(inv - std::round(inv)) < 1e-9) return "1/" + std::to_string(static_cast<long>(std::round(inv)));
  return tick_label(cr);
}

}  // namespace detail

/// Vector-graphic rendering. The plotted series are embedded verbatim as
/// JSON in a <metadata id="plot-data"> element so they can be recovered
/// without parsing the geometry.
inline std::string render_svg(const Figure& f) {
  constexpr double W = 640, H = 420, L = 70, R = 190, T = 40, B = 55;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\">\n";
  os << "<metadata id=\"plot-data\"><![CDATA[" << figure_data(f).dump() << "]]></metadata>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << detail::xml_escape(f.title)
     << "</text>\n";

  if (f.empty()) {
    os << "<text x=\"" << W / 2 << "\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"14\">no data</text>\n";
    os << "</svg>\n";
    return os.str();
  }

  auto tx = [&](double x) { return f.log2_x ? std::log2(x) : x; };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : f.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (x1 - x0 < 1e-12) {
    x0 -= 1.0;
    x1 += 1.0;
  }
  const auto yt = detail::nice_ticks(y1 - y0 < 1e-12 ? y0 - 1.0 : y0, y1 - y0 < 1e-12 ? y1 + 1.0 : y1);
  y0 = yt.front();
  y1 = yt.back();
  const double pw = W - L - R, ph = H - T - B;
  auto px = [&](double x) { return L + (tx(x) - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return T + ph - (y - y0) / (y1 - y0) * ph; };

  os << "<g font-size=\"11\" stroke-width=\"1\">\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double v : yt)
    os << "<line x1=\"" << L << "\" x2=\"" << L + pw << "\" y1=\"" << py(v) << "\" y2=\"" << py(v)
       << "\" stroke=\"#ddd\"/><text x=\"" << L - 6 << "\" y=\"" << py(v) + 4 << "\" text-anchor=\"end\">"
       << detail::tick_label(v) << "</text>\n";
  std::vector<double> xs;
  for (const auto& s : f.series) xs.insert(xs.end(), s.x.begin(), s.x.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.size() > 12) xs = [&] {
    std::vector<double> t;
    for (double v : detail::nice_ticks(x0, x1)) t.push_back(v);
    return t;
  }();
  for (double v : xs)
    os << "<text x=\"" << px(v) << "\" y=\"" << T + ph + 16 << "\" text-anchor=\"middle\">"
       << (f.log2_x ? detail::cr_label(v) : detail::tick_label(v)) << "</text>\n";
  os << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 14 << "\" text-anchor=\"middle\">"
     << detail::xml_escape(f.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << T + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << detail::xml_escape(f.y_label) << "</text>\n";

  for (std::size_t k = 0; k < f.series.size(); ++k) {
    const auto& s = f.series[k];
    const char* c = colors[k % std::size(colors)];
    if (s.x.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) os << (i ? " " : "") << px(s.x[i]) << ',' << py(s.y[i]);
      os << "\"/>\n";
    }
    for (std::size_t i = 0; i < s.x.size(); ++i)
      os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
    const double ly = T + 12 + 16 * static_cast<double>(k);
    os << "<line x1=\"" << L + pw + 10 << "\" x2=\"" << L + pw + 28 << "\" y1=\"" << ly << "\" y2=\"" << ly
       << "\" stroke=\"" << c << "\" stroke-width=\"2\"/><text x=\"" << L + pw + 32 << "\" y=\"" << ly + 4 << "\">"
       << detail::xml_escape(s.name) << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

/// Recovers the embedded series from an SVG produced by render_svg.
inline nlohmann::json read_plot_data(const std::string& svg) {
  const std::string open = "<metadata id=\"plot-data\"><![CDATA[";
  const auto a = svg.find(open);
  const auto b = svg.find("]]></metadata>", a);
  if (a == std::string::npos || b == std::string::npos) throw FormatError("svg: no embedded plot data");
  return nlohmann::json::parse(svg.substr(a + open.size(), b - a - open.size()));
}

namespace detail {

inline std::vector<std::size_t> columns(const CsvTable& t, std::initializer_list<const char*> names) {
  std::vector<std::size_t> out;
  for (const char* n : names) out.push_back(t.column(n));
  return out;
}

}  // namespace detail

/// Rate-vs-CR figures, one per SNR column. Series are (method, bits);
/// points with non-finite rates are left out.
inline std::vector<std::pair<std::string, Figure>> rate_figures(const CsvTable& results) {
  std::vector<std::pair<std::string, Figure>> figs;
  const std::vector<std::pair<std::string, std::string>> snrs{{"rate_0db", "0"}, {"rate_10db", "10"}, {"rate_20db", "20"}};
  for (const auto& [col, snr] : snrs) {
    Figure f;
    f.title = "Achievable rate at SNR " + snr + " dB";
    f.x_label = "compression ratio";
    f.y_label = "rate (bps/Hz)";
    f.log2_x = true;
    if (!results.rows.empty()) {
      const auto c = detail::columns(results, {"method", "cr", "bits", col.c_str()});
      std::map<std::string, std::vector<std::pair<double, double>>> grouped;
      std::vector<std::string> order;
      for (std::size_t i = 0; i < results.rows.size(); ++i) {
        const auto& row = results.rows[i];
        const std::string name = row[c[0]] + " B=" + row[c[2]];
        const double cr = parse_double(row[c[1]], results.line_numbers[i]);
        const double rate = parse_double(row[c[3]], results.line_numbers[i]);
        if (!(cr > 0.0)) throw ParseError(results.line_numbers[i], "cr must be > 0");
        if (!grouped.count(name)) order.push_back(name);
        auto& pts = grouped[name];
        if (std::isfinite(rate)) pts.emplace_back(cr, rate);
      }
      for (const auto& name : order) {
        auto pts = grouped[name];
        std::sort(pts.begin(), pts.end());
        PlotSeries s{name, {}, {}};
        for (const auto& [x, y] : pts) {
          s.x.push_back(x);
          s.y.push_back(y);
        }
        if (!s.x.empty()) f.series.push_back(std::move(s));
      }
    }
    figs.emplace_back("rate_" + snr + "db.svg", std::move(f));
  }
  return figs;
}

/// Mean NMSE (linear mean, then dB) per iteration for every
/// (method, cr, bits) group of a traces CSV.
inline Figure convergence_figure(const CsvTable& traces) {
  Figure f;
  f.title = "NMSE versus iteration";
  f.x_label = "iteration";
  f.y_label = "NMSE (dB)";
  if (traces.rows.empty()) return f;
  const auto c = detail::columns(traces, {"method", "cr", "bits", "iter", "nmse_db"});
  std::map<std::string, std::map<double, std::pair<double, std::size_t>>> acc;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < traces.rows.size(); ++i) {
    const auto& row = traces.rows[i];
    const double cr = parse_double(row[c[1]], traces.line_numbers[i]);
    const std::string name = row[c[0]] + " CR=" + detail::cr_label(cr) + " B=" + row[c[2]];
    const double it = parse_double(row[c[3]], traces.line_numbers[i]);
    const double db = parse_double(row[c[4]], traces.line_numbers[i]);
    if (!acc.count(name)) order.push_back(name);
    auto& cell = acc[name][it];
    cell.first += std::pow(10.0, db / 10.0);
    cell.second += 1;
  }
  for (const auto& name : order) {
    PlotSeries s{name, {}, {}};
    for (const auto& [it, sum] : acc[name]) {
      const double v = 10.0 * std::log10(sum.first / static_cast<double>(sum.second));
      if (!std::isfinite(v)) continue;
      s.x.push_back(it);
      s.y.push_back(v);
    }
    if (!s.x.empty()) f.series.push_back(std::move(s));
  }
  return f;
}

struct PlotOutput {
  std::vector<std::string> files;
  std::vector<std::string> warnings;
};

/// Writes rate_*db.svg from a results CSV and, when a traces CSV is given,
/// convergence.svg. Empty inputs still produce a figure, plus a warning.
inline PlotOutput plot_results(const std::string& results_csv, const std::string& traces_csv,
                               const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  PlotOutput out;
  auto emit = [&](const std::string& name, const Figure& f) {
    const auto path = (fs::path(out_dir) / name).string();
    std::ofstream os(path);
    if (!os) throw Error("cannot write '" + path + "'");
    os << render_svg(f);
    out.files.push_back(path);
    if (f.empty()) out.warnings.push_back(name + ": no data points, wrote an empty plot");
  };
  for (const auto& [name, f] : rate_figures(read_csv_file(results_csv))) emit(name, f);
  if (!traces_csv.empty()) emit("convergence.svg", convergence_figure(read_csv_file(traces_csv)));
  return out;
}

}  // namespace csippp
