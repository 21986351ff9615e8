#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>

#include "dtoda/json_io.hpp"
#include "dtoda/parallel.hpp"
#include "dtoda/toda.hpp"

namespace {

using dtoda::cdouble;
using dtoda::Chart;
using dtoda::json;

struct Options {
  std::string config_path;
  std::string out;
  std::string suite;
  std::string chart;  // empty: read from config, default direct
  int order = -1;
  int grid = -1;
  double tol = -1.0;
  double h = -1.0;
  double tail_guard = -1.0;
  int hessian_range = 0;
};

struct Resolved {
  json config;
  int order = 16;
  int grid = 256;
  double tol = 1e-10;
  double h = 1e-3;
  double tail_guard = -1.0;  // < 0: 100 * tol
  std::string out;
  std::string suite;
  Chart chart = Chart::direct;
};

Chart parse_chart(const std::string& name) {
  if (name == "inverse") return Chart::inverse;
  if (name == "direct") return Chart::direct;
  if (name == "extended") return Chart::extended;
  if (name == "wz") return Chart::wz;
  throw CLI::ValidationError("chart", "unknown chart '" + name + "'");
}

Resolved resolve(const Options& o, double default_tol) {
  Resolved r;
  std::ifstream in(o.config_path);
  if (!in) throw std::invalid_argument("cannot open config " + o.config_path);
  try {
    in >> r.config;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  r.order = o.order > 0 ? o.order : r.config.value("order", 16);
  r.grid = o.grid > 0 ? o.grid : r.config.value("grid", 256);
  r.tol = o.tol > 0 ? o.tol : r.config.value("tol", default_tol);
  r.h = o.h > 0 ? o.h : r.config.value("h", 1e-3);
  r.tail_guard = o.tail_guard > 0 ? o.tail_guard : r.config.value("tail_guard", -1.0);
  r.out = !o.out.empty() ? o.out : r.config.value("out", "");
  r.suite = !o.suite.empty() ? o.suite : r.config.value("suite", "");
  r.chart = parse_chart(!o.chart.empty() ? o.chart : r.config.value("chart", "direct"));
  if (r.order < 2) throw std::invalid_argument("order must be >= 2");
  if (r.grid < 4 * (r.order + 1) || (r.grid & (r.grid - 1)) != 0)
    throw std::invalid_argument("grid must be a power of two with M >= 4(N+1)");
  // default_tol < 0 means the suite picks its own threshold later
  if (r.tol <= 0 && default_tol > 0)
    throw std::invalid_argument("tolerances must be positive");
  return r;
}

void write_output(const Resolved& r, const json& doc, const std::string& csv = "") {
  if (r.out.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream of(r.out);
  if (!of) throw std::invalid_argument("cannot write " + r.out);
  of << doc.dump(2) << "\n";
  if (!csv.empty()) {
    std::string path = r.out;
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
      path = path.substr(0, path.size() - 5);
    path += ".csv";
    std::ofstream cf(path);
    cf << csv;
  }
}

dtoda::CircleHomeo input_gamma(const Resolved& r) {
  if (!r.config.contains("gamma"))
    throw std::invalid_argument("config needs a \"gamma\" object for this command");
  return dtoda::parse_gamma(r.config.at("gamma"), r.order, r.grid);
}

double guard_of(const Resolved& r) {
  return r.tail_guard > 0 ? r.tail_guard : 100.0 * std::max(r.tol, 1e-12);
}

// A pair given directly, or welded from gamma when only gamma is present.
dtoda::UnivalentPair input_pair(const Resolved& r, double weld_tol = 1e-10) {
  if (r.config.contains("pair")) return dtoda::parse_pair(r.config.at("pair"), r.order);
  if (r.config.contains("gamma"))
    return dtoda::weld(input_gamma(r), weld_tol, 60, guard_of(r)).pair;
  throw std::invalid_argument("config needs a \"pair\" or \"gamma\" object");
}

std::string base_label(const Resolved& r) {
  if (r.config.contains("gamma")) return r.config.at("gamma").dump();
  if (r.config.contains("pair")) return "pair(order=" + std::to_string(r.order) + ")";
  return "?";
}

int cmd_weld(const Options& o) {
  const Resolved r = resolve(o, 1e-10);
  const dtoda::WeldingSolution sol = dtoda::weld(input_gamma(r), r.tol, 60, guard_of(r));
  json doc = dtoda::welding_to_json(sol);
  write_output(r, doc, dtoda::curve_to_csv(sol.curve_samples));
  return 0;
}

int cmd_chart(const Options& o) {
  const Resolved r = resolve(o, 1e-10);
  dtoda::CoordinateVector coords;
  if (r.chart == Chart::inverse) {
    const dtoda::CircleHomeo gamma = input_gamma(r);
    coords = dtoda::inverse_chart(gamma, dtoda::weld(gamma, r.tol, 60, guard_of(r)));
  } else if (r.chart == Chart::wz) {
    coords = dtoda::wz_moments(input_pair(r, r.tol).g_series(), r.grid);
  } else {
    coords = dtoda::direct_chart(input_pair(r, r.tol), r.grid, r.chart);
  }
  write_output(r, dtoda::coords_to_json(coords), dtoda::coords_to_csv(coords));
  return 0;
}

int cmd_grunsky(const Options& o) {
  const Resolved r = resolve(o, 1e-10);
  const dtoda::GrunskyMatrix m = dtoda::grunsky(input_pair(r, r.tol));
  write_output(r, dtoda::grunsky_to_json(m), dtoda::grunsky_to_csv(m));
  return 0;
}

int cmd_moments(const Options& o) {
  const Resolved r = resolve(o, 1e-10);
  const dtoda::CoordinateVector c = dtoda::wz_moments(input_pair(r, r.tol).g_series(), r.grid);
  write_output(r, dtoda::coords_to_json(c), dtoda::coords_to_csv(c));
  return 0;
}

int cmd_tau(const Options& o, int hessian_range) {
  const Resolved r = resolve(o, 1e-10);
  dtoda::FreeEnergyRecord rec;
  rec.chart = r.chart;

  std::optional<dtoda::ChartFamily> family;
  dtoda::CoordinateVector coords;
  if (r.chart == Chart::inverse) {
    const dtoda::CircleHomeo gamma = input_gamma(r);
    const dtoda::WeldingSolution sol = dtoda::weld(gamma, r.tol, 60, guard_of(r));
    coords = dtoda::inverse_chart(gamma, sol);
    rec.log_tau = dtoda::log_tau_inverse(gamma, sol, coords);
    if (hessian_range > 0) family = dtoda::ChartFamily::inverse(gamma);
  } else if (r.chart == Chart::wz) {
    throw std::invalid_argument("tau: chart must be inverse, direct or extended");
  } else {
    const dtoda::UnivalentPair pair = input_pair(r, r.tol);
    coords = dtoda::direct_chart(pair, r.grid, r.chart);
    rec.log_tau = (r.chart == Chart::extended)
                      ? cdouble(dtoda::log_tau_extended(pair, coords), 0.0)
                      : dtoda::log_tau_direct(pair, coords);
    if (hessian_range > 0) family = dtoda::ChartFamily::direct(pair, r.chart, r.grid);
  }
  // the v-vector is the gradient of log tau in the chart coordinates
  const int span = std::min(coords.order, 3);
  for (int n = -span; n <= span; ++n) {
    rec.indices.push_back(n);
    rec.gradient.push_back(coords.v_at(n));
  }
  if (family) {
    std::vector<int> idx;
    for (int n = -hessian_range; n <= hessian_range; ++n)
      if (std::abs(n) <= coords.order) idx.push_back(n);
    const dtoda::FreeEnergyRecord fd = dtoda::hessian_fd(*family, idx, r.h);
    rec.indices = fd.indices;
    rec.gradient = fd.gradient;
    rec.hessian = fd.hessian;
  }
  write_output(r, dtoda::free_energy_to_json(rec));
  return 0;
}

// one verification row in the report
json row(const std::string& check, Chart chart, const std::string& base, int n, double h,
         double res, double res_half, double ratio, bool pass) {
  return json{{"check", check},  {"chart", dtoda::chart_name(chart)},
              {"base", base},    {"n", n},
              {"h", h},          {"residual", res},
              {"h_half_residual", res_half}, {"ratio", ratio},
              {"pass", pass}};
}

int cmd_verify(const Options& o) {
  const Resolved r = resolve(o, -1.0);  // suite-specific defaults below
  const std::string suite = r.suite;
  if (suite.empty())
    throw std::invalid_argument("verify: --suite required "
                                "(hirota|lax|string|rh|symmetry|gradient)");
  const std::string base = base_label(r);
  json rows = json::array();
  bool all_pass = true;
  std::mutex mtx;

  const bool is_inverse = r.config.contains("gamma") && !r.config.contains("pair");
  const Chart chart = is_inverse ? Chart::inverse : r.chart;

  const auto family = [&]() -> dtoda::ChartFamily {
    if (is_inverse) return dtoda::ChartFamily::inverse(input_gamma(r));
    return dtoda::ChartFamily::direct(input_pair(r), chart == Chart::wz ? Chart::direct : chart,
                                      r.grid);
  };

  if (suite == "lax") {
    const double tol = r.tol > 0 ? r.tol : 1e-5;
    const dtoda::ChartFamily fam = family();
    const std::vector<int> ns = {1, -1, 2, -2};
    std::vector<json> out(ns.size());
    dtoda::parallel_for(static_cast<int>(ns.size()), [&](int i) {
      const auto rep = dtoda::lax_residual(fam, ns[i], r.h);
      const auto rep2 = dtoda::lax_residual(fam, ns[i], r.h / 2);
      const double ratio = rep.residual / std::max(rep2.residual, 1e-300);
      const bool pass = rep.residual < tol && ratio > 3.5 && ratio < 4.5;
      out[i] = row("lax", fam.chart(), base, ns[i], r.h, rep.residual, rep2.residual,
                   ratio, pass);
    });
    for (const auto& j : out) {
      all_pass = all_pass && j.at("pass").get<bool>();
      rows.push_back(j);
    }
  } else if (suite == "string") {
    const double tol = r.tol > 0 ? r.tol : 1e-5;
    const dtoda::ChartFamily fam = family();
    const double res = dtoda::string_residual(fam, r.h);
    const double res2 = dtoda::string_residual(fam, r.h / 2);
    const double ratio = res / std::max(res2, 1e-300);
    const bool pass = res < tol && ratio > 3.5 && ratio < 4.5;
    all_pass = pass;
    rows.push_back(row("string", fam.chart(), base, 0, r.h, res, res2, ratio, pass));
  } else if (suite == "rh") {
    const double tol = r.tol > 0 ? r.tol : 1e-6;
    dtoda::RhReport rep;
    Chart used = chart;
    if (is_inverse) {
      const dtoda::CircleHomeo gamma = input_gamma(r);
      const dtoda::WeldingSolution sol = dtoda::weld(gamma, 1e-10, 60, guard_of(r));
      rep = dtoda::rh_residual_inverse(gamma, dtoda::inverse_chart(gamma, sol));
      used = Chart::inverse;
    } else {
      const dtoda::UnivalentPair pair = input_pair(r);
      rep = dtoda::rh_residual(pair, dtoda::direct_chart(pair, r.grid), r.grid);
      used = Chart::direct;
    }
    const bool pass = rep.res1 < tol && rep.res2 < tol && rep.res_mm < tol;
    all_pass = pass;
    rows.push_back(row("rh.rel1", used, base, 0, 0, rep.res1, 0, 0, rep.res1 < tol));
    rows.push_back(row("rh.rel2", used, base, 0, 0, rep.res2, 0, 0, rep.res2 < tol));
    rows.push_back(row("rh.M=Mt", used, base, 0, 0, rep.res_mm, 0, 0, rep.res_mm < tol));
  } else if (suite == "gradient") {
    const double tol = r.tol > 0 ? r.tol : 1e-6;
    const dtoda::ChartFamily fam = family();
    std::vector<int> idx;
    for (int n = -3; n <= 3; ++n)
      if (std::abs(n) <= fam.order()) idx.push_back(n);
    const auto grad = dtoda::gradient_fd(fam, idx, r.h);
    const auto& coords = fam.base_point().coords;
    for (size_t i = 0; i < idx.size(); ++i) {
      const double err = std::abs(grad[i] - coords.v_at(idx[i])) /
                         std::max(1.0, std::abs(coords.v_at(idx[i])));
      const bool pass = err < tol;
      all_pass = all_pass && pass;
      rows.push_back(row("gradient", fam.chart(), base, idx[i], r.h, err, 0, 0, pass));
    }
  } else if (suite == "hirota") {
    const double tol = r.tol > 0 ? r.tol : 1e-5;
    const dtoda::ChartFamily fam = family();
    const int range = std::min(2, fam.order() / 2);
    std::vector<int> idx;
    for (int n = -range; n <= range; ++n) idx.push_back(n);
    const auto rec = dtoda::hessian_fd(fam, idx, r.h);
    const dtoda::UnivalentPair& pair = fam.base_point().pair;
    const dtoda::GrunskyMatrix gm =
        (fam.chart() == Chart::inverse) ? dtoda::grunsky(pair)
                                        : dtoda::grunsky(pair.inverse_pair());
    const int K = static_cast<int>(idx.size());
    for (int i = 0; i < K; ++i)
      for (int j = i; j < K; ++j) {
        const cdouble want = dtoda::hessian_expected(gm, idx[i], idx[j]);
        const cdouble got = rec.hessian[static_cast<size_t>(i) * K + j];
        const double err = std::abs(got - want) / std::max(1.0, std::abs(want));
        const bool pass = err < tol;
        all_pass = all_pass && pass;
        rows.push_back(row("hirota(" + std::to_string(idx[i]) + "," +
                               std::to_string(idx[j]) + ")",
                           fam.chart(), base, idx[j], r.h, err, 0, 0, pass));
      }
  } else if (suite == "symmetry") {
    const double tol = r.tol > 0 ? r.tol : 1e-9;
    const dtoda::UnivalentPair pair = input_pair(r);
    const dtoda::GrunskyMatrix gm = dtoda::grunsky(pair);
    const double defect = gm.symmetry_defect();
    all_pass = defect < tol;
    rows.push_back(row("grunsky.symmetry", chart, base, 0, 0, defect, 0, 0, all_pass));
    // interior/exterior swap: t'_n = -t_{-n}, v'_n = -v_{-n} (n != 0),
    // unchanged at n = 0
    const dtoda::CoordinateVector c = dtoda::direct_chart(pair, r.grid);
    const dtoda::CoordinateVector cs =
        dtoda::direct_chart(dtoda::swap_interior_exterior(pair), r.grid);
    double worst = 0.0;
    for (int n = -c.order / 2; n <= c.order / 2; ++n) {
      const double sgn = (n == 0) ? 1.0 : -1.0;
      worst = std::max(worst, std::abs(cs.t_at(n) - sgn * c.t_at(-n)));
      worst = std::max(worst, std::abs(cs.v_at(n) - sgn * c.v_at(-n)));
    }
    const bool pass = worst < tol;
    all_pass = all_pass && pass;
    rows.push_back(row("swap.symmetry", chart, base, 0, 0, worst, 0, 0, pass));
  } else {
    throw std::invalid_argument("verify: unknown suite '" + suite + "'");
  }

  (void)mtx;
  json doc{{"suite", suite}, {"pass", all_pass}, {"rows", rows}};
  write_output(r, doc);
  for (const auto& j : rows)
    std::cerr << (j.at("pass").get<bool>() ? "PASS " : "FAIL ") << j.at("check").get<std::string>()
              << " residual=" << j.at("residual").get<double>() << "\n";
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conformal welding / dispersionless Toda toolkit"};
  app.set_help_flag("--help", "print help");  // keep --h free for the FD step
  app.require_subcommand(1);

  Options o;
  int hessian_range = 0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("config", o.config_path, "JSON run configuration")->required();
    cmd->add_option("--order", o.order, "series truncation order N");
    cmd->add_option("--grid", o.grid, "circle grid size M (power of two)");
    cmd->add_option("--tol", o.tol, "solver / check tolerance");
    cmd->add_option("--h", o.h, "finite difference step");
    cmd->add_option("--tail-guard", o.tail_guard,
                    "allowed welding residual beyond mode N (default 100 tol)");
    cmd->add_option("--out", o.out, "output path (JSON; CSV written alongside)");
  };

  auto* weld = app.add_subcommand("weld", "solve the conformal welding of gamma");
  add_common(weld);
  auto* chart = app.add_subcommand("chart", "coordinate chart of the input");
  add_common(chart);
  chart->add_option("--chart", o.chart, "inverse|direct|extended|wz");
  auto* grunsky = app.add_subcommand("grunsky", "Grunsky matrix of the pair");
  add_common(grunsky);
  auto* tau = app.add_subcommand("tau", "free energy log tau");
  add_common(tau);
  tau->add_option("--chart", o.chart, "inverse|direct|extended");
  tau->add_option("--hessian-range", hessian_range, "probe the FD Hessian over |n| <= range");
  auto* moments = app.add_subcommand("moments", "harmonic moments of g");
  add_common(moments);
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify);
  verify->add_option("--suite", o.suite, "hirota|lax|string|rh|symmetry|gradient");
  verify->add_option("--chart", o.chart, "chart for pair input");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (weld->parsed()) return cmd_weld(o);
    if (chart->parsed()) return cmd_chart(o);
    if (grunsky->parsed()) return cmd_grunsky(o);
    if (tau->parsed()) return cmd_tau(o, hessian_range);
    if (moments->parsed()) return cmd_moments(o);
    if (verify->parsed()) return cmd_verify(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const dtoda::Error& e) {
    json err{{"error", {{"type", "numeric"}, {"message", e.what()}}}};
    std::cout << err.dump(2) << "\n";
    return 2;
  }
  return 1;
}
