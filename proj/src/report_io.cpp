#include <critnls/report_io.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace critnls {

namespace {
using json = nlohmann::ordered_json;
}

json report_json(const ExperimentReport& rep) {
  json doc;
  doc["id"] = rep.id;
  doc["verdict"] = verdict_name(rep.verdict);
  doc["reason"] = rep.reason;
  doc["params"] = rep.params;
  doc["measurements"] = rep.measurements;
  doc["provenance"] = rep.provenance;
  return doc;
}

ExperimentReport report_from_json(const json& doc) {
  ExperimentReport rep;
  rep.id = doc.at("id").get<std::string>();
  const std::string v = doc.at("verdict").get<std::string>();
  if (v == "pass")
    rep.verdict = ExperimentReport::Verdict::pass;
  else if (v == "fail")
    rep.verdict = ExperimentReport::Verdict::fail;
  else if (v == "inconclusive")
    rep.verdict = ExperimentReport::Verdict::inconclusive;
  else
    throw std::runtime_error("report: unknown verdict \"" + v + "\"");
  rep.reason = doc.at("reason").get<std::string>();
  rep.params = doc.at("params");
  rep.measurements = doc.at("measurements");
  rep.provenance = doc.at("provenance");
  return rep;
}

void write_report_json(const ExperimentReport& rep, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << report_json(rep).dump(2) << "\n";
}

namespace {

void flatten(const json& node, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "/" + it.key(), rows);
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i)
      flatten(node[i], prefix + "/" + std::to_string(i), rows);
  } else {
    rows.emplace_back(prefix, node.dump());
  }
}

}  // namespace

void write_report_csv(const ExperimentReport& rep, const std::string& path) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("id", "\"" + rep.id + "\"");
  rows.emplace_back("verdict", std::string("\"") + verdict_name(rep.verdict) + "\"");
  flatten(rep.params, "params", rows);
  flatten(rep.measurements, "measurements", rows);
  flatten(rep.provenance, "provenance", rows);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "key,value\n";
  for (const auto& [k, v] : rows) out << k << "," << v << "\n";
}

namespace {

struct LogRange {
  double lo = 0, hi = 1;
};

LogRange log_range(const std::vector<PlotSeries>& series, bool y_axis) {
  double lo = 0, hi = 0;
  bool any = false;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      const double x = s.xs[i], y = s.ys[i];
      if (!(x > 0) || !(y > 0) || !std::isfinite(x) || !std::isfinite(y)) continue;
      const double v = std::log10(y_axis ? y : x);
      if (!any) {
        lo = hi = v;
        any = true;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (!any) return {0, 1};
  if (hi - lo < 0.5) {
    const double mid = 0.5 * (lo + hi);
    lo = mid - 0.25;
    hi = mid + 0.25;
  }
  const double pad = 0.06 * (hi - lo);
  return {lo - pad, hi + pad};
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string pow10_label(int e) {
  std::ostringstream os;
  os << "1e" << e;
  return os.str();
}

}  // namespace

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series) {
  const double W = 640, H = 480;
  const double ml = 70, mr = 24, mt = 42, mb = 56;
  const double pw = W - ml - mr, ph = H - mt - mb;
  const LogRange xr = log_range(series, false);
  const LogRange yr = log_range(series, true);
  auto px = [&](double x) { return ml + (std::log10(x) - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return mt + (yr.hi - std::log10(y)) / (yr.hi - yr.lo) * ph; };

  static const char* colors[] = {"#1f6fb2", "#c0392b", "#27785a", "#8e5aa2",
                                 "#b07d2b", "#3a3a3a"};
  const int ncolors = 6;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n";

  // decade grid
  for (int e = static_cast<int>(std::ceil(xr.lo)); e <= static_cast<int>(std::floor(xr.hi)); ++e) {
    const double x = px(std::pow(10.0, e));
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << mt << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << mt + ph << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << fmt(x) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << pow10_label(e) << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(yr.lo)); e <= static_cast<int>(std::floor(yr.hi)); ++e) {
    const double y = py(std::pow(10.0, e));
    svg << "<line x1=\"" << ml << "\" y1=\"" << fmt(y) << "\" x2=\"" << ml + pw
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << pow10_label(e) << "</text>\n";
  }
  svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444444\"/>\n";
  svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 16 "
      << mt + ph / 2 << ")\">" << y_label << "</text>\n";

  double legend_y = mt + 14;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* col = colors[si % ncolors];
    // fit line across the x range of the usable points
    if (s.has_fit) {
      double xlo = 0, xhi = 0;
      bool any = false;
      for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
        if (!(s.xs[i] > 0) || !(s.ys[i] > 0)) continue;
        if (!any) {
          xlo = xhi = s.xs[i];
          any = true;
        } else {
          xlo = std::min(xlo, s.xs[i]);
          xhi = std::max(xhi, s.xs[i]);
        }
      }
      if (any && xhi > xlo) {
        const double y1 = std::exp(s.fit.intercept + s.fit.slope * std::log(xlo));
        const double y2 = std::exp(s.fit.intercept + s.fit.slope * std::log(xhi));
        svg << "<line x1=\"" << fmt(px(xlo)) << "\" y1=\"" << fmt(py(y1))
            << "\" x2=\"" << fmt(px(xhi)) << "\" y2=\"" << fmt(py(y2))
            << "\" stroke=\"" << col << "\" stroke-dasharray=\"6 4\"/>\n";
      }
    }
    for (std::size_t i = 0; i < s.xs.size() && i < s.ys.size(); ++i) {
      if (!(s.xs[i] > 0) || !(s.ys[i] > 0)) continue;
      svg << "<circle cx=\"" << fmt(px(s.xs[i])) << "\" cy=\"" << fmt(py(s.ys[i]))
          << "\" r=\"3.5\" fill=\"" << col << "\"/>\n";
    }
    std::ostringstream lab;
    lab << s.label;
    if (s.has_fit)
      lab << " (slope " << std::setprecision(3) << s.fit.slope << ")";
    svg << "<circle cx=\"" << ml + pw - 150 << "\" cy=\"" << legend_y - 4
        << "\" r=\"3.5\" fill=\"" << col << "\"/>\n";
    svg << "<text x=\"" << ml + pw - 142 << "\" y=\"" << legend_y
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << lab.str()
        << "</text>\n";
    legend_y += 16;
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << svg.str();
}

namespace {

std::vector<double> doubles_of(const json& arr) {
  std::vector<double> v;
  if (!arr.is_array()) return v;
  for (const auto& e : arr)
    v.push_back(e.is_number() ? e.get<double>() : std::nan(""));
  return v;
}

FitResult fit_of(const json& fj) {
  FitResult f;
  f.slope = fj.value("slope", 0.0);
  f.intercept = fj.value("intercept", 0.0);
  f.r2 = fj.value("r2", 0.0);
  f.points = fj.value("points", 0);
  f.decades = fj.value("decades", 0.0);
  return f;
}

std::vector<double> index_abscissa(std::size_t count) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = double(i + 1);
  return v;
}

// The log-log chart a given report naturally carries; empty when none.
std::vector<PlotSeries> chart_of(const ExperimentReport& rep, std::string& title,
                                 std::string& xl, std::string& yl) {
  const json& m = rep.measurements;
  std::vector<PlotSeries> out;
  if (rep.id == "lipschitz" && m.contains("data_distances")) {
    PlotSeries s;
    s.label = "sup-t L2 distance";
    s.xs = doubles_of(m["data_distances"]);
    s.ys = doubles_of(m["solution_distances"]);
    if (m.contains("fit")) {
      s.has_fit = true;
      s.fit = fit_of(m["fit"]);
    }
    out.push_back(s);
    title = "solution distance vs data distance";
    xl = "||u0 - v0||_L2";
    yl = "sup_t ||u - v||_L2";
  } else if (rep.id == "stability" && m.contains("data_distances")) {
    PlotSeries s;
    s.label = "W deviation";
    s.xs = doubles_of(m["data_distances"]);
    s.ys = doubles_of(m["w_deviations"]);
    if (m.contains("fit")) {
      s.has_fit = true;
      s.fit = fit_of(m["fit"]);
    }
    out.push_back(s);
    title = "perturbation growth vs data distance";
    xl = "||u0 - v0||_Hdot1";
    yl = "||u - v||_W";
  } else if (rep.id == "nonlinear-estimate" && m.contains("dims")) {
    for (const auto& dj : m["dims"]) {
      PlotSeries s;
      s.label = "n = " + std::to_string(dj.value("n", 0));
      s.xs = doubles_of(dj["para_M"]);
      s.ys = doubles_of(dj["para_values"]);
      if (dj.contains("para_fit")) {
        s.has_fit = true;
        s.fit = fit_of(dj["para_fit"]);
      }
      out.push_back(s);
    }
    title = "frequency-localized kernel decay";
    xl = "band frequency M";
    yl = "||P_M(f_z(v) u)||";
  } else if (rep.id == "scattering" && m.contains("increments")) {
    PlotSeries s;
    s.label = "pullback increments";
    s.ys = doubles_of(m["increments"]);
    s.xs = index_abscissa(s.ys.size());
    out.push_back(s);
    title = "Cauchy increments of the pullback state";
    xl = "checkpoint index";
    yl = "Hdot1 increment";
  } else if (rep.id == "strichartz" && m.contains("ratios")) {
    PlotSeries s;
    s.label = "per-seed ratio";
    s.ys = doubles_of(m["ratios"]);
    s.xs = index_abscissa(s.ys.size());
    out.push_back(s);
    title = "Strichartz quotients by seed";
    xl = "seed index";
    yl = "S1 / (Hdot1 + N1)";
  } else if (rep.id == "exotic-strichartz" && m.contains("geometries")) {
    for (const auto& gj : m["geometries"]) {
      PlotSeries s;
      s.label = gj.value("geometry", std::string("geometry"));
      s.ys = doubles_of(gj["ratios"]);
      s.xs = index_abscissa(s.ys.size());
      out.push_back(s);
    }
    title = "exotic-pair quotients by seed";
    xl = "seed index";
    yl = "X / Y";
  } else if (rep.id == "small-data" && m.contains("W_over_eta")) {
    const char* keys[] = {"W_over_eta", "S0_over_mass", "S1_over_critical"};
    for (const char* k : keys) {
      if (!m.contains(k)) continue;
      PlotSeries s;
      s.label = k;
      s.ys = doubles_of(m[k]);
      s.xs = index_abscissa(s.ys.size());
      out.push_back(s);
    }
    title = "small-data quotients across the eta schedule";
    xl = "schedule index";
    yl = "quotient";
  }
  return out;
}

}  // namespace

std::vector<std::string> write_report_bundle(const ExperimentReport& rep,
                                             const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  const std::string base = (std::filesystem::path(dir) / rep.id).string();
  write_report_json(rep, base + ".json");
  written.push_back(base + ".json");
  write_report_csv(rep, base + ".csv");
  written.push_back(base + ".csv");
  std::string title, xl, yl;
  const auto series = chart_of(rep, title, xl, yl);
  if (!series.empty()) {
    write_loglog_svg(base + ".svg", title, xl, yl, series);
    written.push_back(base + ".svg");
  }
  return written;
}

}  // namespace critnls
