#pragma once

// JSON forms of presentations, tables and verdicts. Every top-level object
// carries "schema": 1. Coefficients are strings so rationals stay exact.

#include <json.hpp>

#include "classify.hpp"
#include "structure.hpp"

namespace tailsheaf {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

template <Field F>
Json to_json(const Poly<F>& f) {
  Json terms = Json::array();
  for (const auto& [mono, c] : f.terms()) {
    Json e = Json::array();
    for (int v = 0; v < f.nvars(); ++v) e.push_back(mono.exp[v]);
    terms.push_back(Json::array({c.to_string(), e}));
  }
  return terms;
}

template <Field F>
Poly<F> poly_from_json(const Json& j, int nvars) {
  if (!j.is_array()) throw ParseError("polynomial must be a list of [coefficient, exponents] terms", 1, 1);
  std::vector<typename Poly<F>::Term> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_string() || !t[1].is_array() || static_cast<int>(t[1].size()) != nvars)
      throw ParseError("term must be [\"coefficient\", [e_0, .., e_n]]", 1, 1);
    Monomial m;
    for (int v = 0; v < nvars; ++v) {
      int e = t[1][v].get<int>();
      if (e < 0) throw ParseError("negative exponent", 1, 1);
      m.exp[v] = static_cast<std::uint16_t>(e);
      m.degree += e;
    }
    terms.emplace_back(m, F::parse(t[0].get<std::string>()));
  }
  return Poly<F>(nvars, std::move(terms));
}

template <Field F>
Json to_json(const DenseMatrix<F>& a) {
  Json out = Json::array();
  for (int i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < a.cols(); ++j) row.push_back(a(i, j).to_string());
    out.push_back(row);
  }
  return out;
}

template <Field F>
Json to_json(const SheafPresentation<F>& p) {
  Json m = Json::array();
  for (int i = 0; i < p.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < p.cols(); ++j) row.push_back(to_json(p(i, j)));
    m.push_back(row);
  }
  return Json{{"schema", kSchemaVersion},
              {"ring", {{"n", p.n()}, {"field", F::name()}}},
              {"source", p.source_twists()},
              {"target", p.target_twists()},
              {"matrix", m}};
}

template <Field F>
SheafPresentation<F> presentation_from_json(const Json& j, bool check_field = true) {
  try {
    if (j.value("schema", 0) != kSchemaVersion) throw ParseError("unsupported schema version", 1, 1);
    int n = j.at("ring").at("n").get<int>();
    std::string field = j.at("ring").value("field", std::string("QQ"));
    if (check_field && field != F::name()) throw ParseError("input is over " + field + " but the computation runs over " + F::name(), 1, 1);
    auto a = j.at("source").get<std::vector<int>>();
    auto b = j.at("target").get<std::vector<int>>();
    typename SheafPresentation<F>::Matrix m;
    for (const auto& row : j.at("matrix")) {
      std::vector<Poly<F>> r;
      for (const auto& e : row) r.push_back(poly_from_json<F>(e, n + 1));
      m.push_back(std::move(r));
    }
    if (b.empty()) throw ValidationError("empty target: the matrix has no columns");
    return SheafPresentation<F>(n, std::move(a), std::move(b), std::move(m));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed presentation JSON: ") + e.what(), 1, 1);
  }
}

template <Field F>
Json to_json(const TransformationRecord<F>& r) {
  return Json{{"rows", to_json(r.rows)}, {"cols", to_json(r.cols)}, {"coords", to_json(r.coords)}};
}

inline Json to_json(const std::vector<Rational>& point) {
  Json out = Json::array();
  for (const auto& c : point) out.push_back(c.to_string());
  return out;
}

inline Json to_json(const CohomologyTable& tab) {
  Json rows = Json::array();
  for (int t = tab.tmin; t <= tab.tmax; ++t) rows.push_back(Json{{"t", t}, {"h", tab.h[t - tab.tmin]}});
  return Json{{"schema", kSchemaVersion}, {"n", tab.n}, {"tmin", tab.tmin}, {"tmax", tab.tmax}, {"engine", tab.engine}, {"rows", rows}};
}

inline Json to_json(const HilbertSeries& hs) {
  auto r = hs.reduced();
  return Json{{"series", hs.to_string()}, {"low", hs.low()}, {"numerator", hs.numerator()}, {"dimension", r.dimension}};
}

inline Json to_json(const TailClassification& c) {
  Json w = Json::array();
  for (auto [t, h] : c.witness) w.push_back(Json{{"t", t}, {"h", h}});
  Json out{{"schema", kSchemaVersion}, {"is_tail", c.is_tail}, {"m", c.m}};
  if (c.is_tail) {
    out["k"] = c.k;
    out["normalized"] = c.normalized;
    out["minimal"] = c.minimal;
    out["level"] = c.level;
  } else {
    out["witness"] = w;
    out["unstable_degrees"] = c.unstable_degrees;
  }
  out["hilbert_series"] = to_json(c.hs);
  out["certificate"] = c.certificate;
  return out;
}

inline Json to_json(const ZeroLocus& z) {
  Json pts = Json::array();
  for (const auto& p : z.points) pts.push_back(Json{{"point", p.to_string()}, {"multiplicity", p.multiplicity}});
  return Json{{"kind", to_string(z.kind)}, {"dimension", z.dimension}, {"length", z.length}, {"points", pts},
              {"unresolved_length", z.unresolved_length}};
}

inline Json to_json(const SingularLocusReport& r) {
  Json gens = Json::array();
  for (const auto& g : r.f0.basis()) gens.push_back(g.to_string());
  return Json{{"schema", kSchemaVersion},
              {"fitting_ideal", gens},
              {"locus", to_json(r.locus)},
              {"ext_length", r.ext_length},
              {"ext_dimension", r.ext_dimension},
              {"codim_at_least_3", r.codim_at_least_3},
              {"reflexive", r.note}};
}

inline Json to_json(const PeelResult& r) {
  return Json{{"schema", kSchemaVersion},  {"point", to_json(r.point)},       {"row", r.row},
              {"combination", to_json(r.combination)}, {"transformed", to_json(r.transformed)},
              {"quotient", to_json(r.quotient)},       {"record", to_json(r.record)}};
}

inline Json to_json(const BlockDecomposition& d) {
  Json blocks = Json::array();
  for (const auto& b : d.blocks)
    blocks.push_back(Json{{"m", b.m}, {"point", to_json(b.point)}, {"rows", b.rows}, {"cols", b.cols}, {"presentation", to_json(b.presentation)}});
  return Json{{"schema", kSchemaVersion}, {"blocks", blocks}, {"stages", d.stages}, {"record", to_json(d.record)}};
}

template <Field F>
Json to_json(const LevelSplit<F>& s) {
  return Json{{"schema", kSchemaVersion}, {"m", s.m},          {"shift", s.shift},
              {"minimal_columns", s.minimal_columns}, {"summands", s.summands},
              {"verified", s.verified},    {"diagnostics", s.diagnostics}, {"minimal_part", to_json(s.minimal_part)}};
}

template <Field F>
Json to_json(const Restriction<F>& r) {
  Json c = Json::array();
  for (const auto& x : r.coefficients) c.push_back(x.to_string());
  return Json{{"schema", kSchemaVersion}, {"hyperplane", hyperplane_to_string(r.coefficients)}, {"coefficients", c},
              {"attempts", r.attempts},     {"certificate", r.certificate},                       {"presentation", to_json(r.presentation)}};
}

template <Field F>
Json to_json(const TangentRecognition<F>& t) {
  Json out{{"success", t.success}, {"m", t.m}, {"twist", t.twist}};
  if (t.success) out["record"] = to_json(t.record);
  else out["reason"] = t.reason;
  return out;
}

}  // namespace tailsheaf
