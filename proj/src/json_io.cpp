#include "dtoda/json_io.hpp"

#include <cstdio>

namespace dtoda {

namespace {

cdouble parse_complex(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw Error("expected [re, im] pair in JSON input");
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_to_json(cdouble z) { return json::array({z.real(), z.imag()}); }

}  // namespace

CircleHomeo parse_gamma(const json& doc, int N, int M) {
  const std::string type = doc.value("type", "");
  if (type == "mobius") {
    MobiusParams p;
    p.a = parse_complex(doc.at("a"));
    p.alpha = doc.value("alpha", 0.0);
    return CircleHomeo::mobius(p, N, M);
  }
  if (type == "identity") return CircleHomeo::identity(N, M);
  if (type == "fourier") {
    std::vector<std::pair<int, cdouble>> coeffs;
    for (const auto& row : doc.at("coeffs"))
      coeffs.emplace_back(row.at(0).get<int>(),
                          cdouble(row.at(1).get<double>(), row.at(2).get<double>()));
    return CircleHomeo::from_fourier(coeffs, N, M);
  }
  if (type == "perturbed_mobius") {
    const CircleHomeo base = parse_gamma(doc.at("base"), N, M);
    std::vector<std::pair<int, cdouble>> modes;
    for (const auto& row : doc.at("modes"))
      modes.emplace_back(row.at(0).get<int>(),
                         cdouble(row.at(1).get<double>(), row.at(2).get<double>()));
    return CircleHomeo::perturbed(base, modes);
  }
  throw Error("parse_gamma: unknown homeomorphism type '" + type + "'");
}

UnivalentPair parse_pair(const json& doc, int N) {
  TruncatedSeries f(N), g(N);
  for (const auto& row : doc.at("f")) {
    const int n = row.at(0).get<int>();
    if (n < 1 || n > N) throw Error("parse_pair: f exponent out of range");
    f.set_coeff(n, cdouble(row.at(1).get<double>(), row.at(2).get<double>()));
  }
  g.set_coeff(1, parse_complex(doc.at("g_lead")));
  for (const auto& row : doc.at("g")) {
    const int n = row.at(0).get<int>();
    if (n < 0 || n > N) throw Error("parse_pair: g index out of range");
    g.set_coeff(-n, cdouble(row.at(1).get<double>(), row.at(2).get<double>()));
  }
  return UnivalentPair::from_series(f, g);
}

bool looks_like_pair(const json& doc) {
  return doc.is_object() && (doc.value("type", "") == "pair" || doc.contains("g_lead"));
}

json pair_to_json(const UnivalentPair& pair) {
  json jf = json::array(), jg = json::array();
  for (int n = 1; n <= pair.order; ++n)
    jf.push_back(json::array(
        {n, pair.f_coeffs[n - 1].real(), pair.f_coeffs[n - 1].imag()}));
  for (int n = 0; n <= pair.order; ++n)
    jg.push_back(json::array({n, pair.g_coeffs[n].real(), pair.g_coeffs[n].imag()}));
  return json{{"type", "pair"},
              {"order", pair.order},
              {"f", jf},
              {"g_lead", complex_to_json(pair.g_lead)},
              {"g", jg}};
}

json welding_to_json(const WeldingSolution& sol) {
  return json{{"pair", pair_to_json(sol.pair)},
              {"residual_sup", sol.residual_sup},
              {"newton_iters", sol.newton_iters}};
}

json coords_to_json(const CoordinateVector& c) {
  json jt = json::array(), jv = json::array();
  for (int n = -c.order; n <= c.order; ++n) {
    jt.push_back(json::array({n, c.t_at(n).real(), c.t_at(n).imag()}));
    jv.push_back(json::array({n, c.v_at(n).real(), c.v_at(n).imag()}));
  }
  return json{{"chart", chart_name(c.chart)}, {"order", c.order}, {"t", jt}, {"v", jv}};
}

json grunsky_to_json(const GrunskyMatrix& m) {
  const int Ng = m.order();
  json rows = json::array();
  for (int i = -Ng; i <= Ng; ++i) {
    json row = json::array();
    for (int j = -Ng; j <= Ng; ++j)
      row.push_back(json::array({m.at(i, j).real(), m.at(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return json{{"order", Ng}, {"index_offset", Ng}, {"entries", rows},
              {"symmetry_defect", m.symmetry_defect()}};
}

json free_energy_to_json(const FreeEnergyRecord& rec) {
  json grad = json::array();
  for (size_t i = 0; i < rec.indices.size(); ++i)
    grad.push_back(json::array({rec.indices[i], rec.gradient.empty() ? 0.0 : rec.gradient[i].real(),
                                rec.gradient.empty() ? 0.0 : rec.gradient[i].imag()}));
  json hess = json::array();
  const int K = static_cast<int>(rec.indices.size());
  if (!rec.hessian.empty()) {
    for (int i = 0; i < K; ++i) {
      json row = json::array();
      for (int j = 0; j < K; ++j) {
        const cdouble v = rec.hessian[static_cast<size_t>(i) * K + j];
        row.push_back(json::array({v.real(), v.imag()}));
      }
      hess.push_back(std::move(row));
    }
  }
  return json{{"chart", chart_name(rec.chart)},
              {"log_tau", complex_to_json(rec.log_tau)},
              {"indices", rec.indices},
              {"gradient", grad},
              {"hessian", hess}};
}

std::string format_float(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string coords_to_csv(const CoordinateVector& c) {
  std::string out = "n,t_re,t_im,v_re,v_im\n";
  for (int n = -c.order; n <= c.order; ++n) {
    out += std::to_string(n) + "," + format_float(c.t_at(n).real()) + "," +
           format_float(c.t_at(n).imag()) + "," + format_float(c.v_at(n).real()) + "," +
           format_float(c.v_at(n).imag()) + "\n";
  }
  return out;
}

std::string grunsky_to_csv(const GrunskyMatrix& m) {
  std::string out = "m,n,re,im\n";
  for (int i = -m.order(); i <= m.order(); ++i)
    for (int j = -m.order(); j <= m.order(); ++j)
      out += std::to_string(i) + "," + std::to_string(j) + "," +
             format_float(m.at(i, j).real()) + "," + format_float(m.at(i, j).imag()) +
             "\n";
  return out;
}

std::string curve_to_csv(const std::vector<cdouble>& samples) {
  std::string out = "k,re,im\n";
  for (size_t k = 0; k < samples.size(); ++k)
    out += std::to_string(k) + "," + format_float(samples[k].real()) + "," +
           format_float(samples[k].imag()) + "\n";
  return out;
}

}  // namespace dtoda
