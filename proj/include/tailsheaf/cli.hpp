#pragma once

// The tailsheaf command-line front end. run() is the whole program minus
// main(), so tests can drive it with string arguments and capture output.
//
// Exit codes: 0 ok, 2 usage / unknown command, 3 parse or validation error,
// 4 precondition failure, 5 engine mismatch or internal inconsistency.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "serialize.hpp"

namespace tailsheaf::cli {

enum ExitCode { kOk = 0, kUsage = 2, kInvalid = 3, kPrecondition = 4, kMismatch = 5 };

struct RunConfig {
  std::string command;
  std::string fixture;
  std::string input;
  bool json = false;
  bool csv = false;
  std::optional<int> tmin, tmax;
  std::string engine = "dense";
  std::string field;  // empty: take it from the input, QQ for fixtures
  std::uint64_t seed = 0;
  int threads = 1;
  // construct
  std::string kind;
  int n = 3;
  int m = 1;
  std::string points;  // "1:0:0:0;0:0:0:1"
  std::string ideal;   // "x0^2, x0*x1, ..." in x0..x_{n-1}
  std::string hyperplane;  // "c0,..,c_{n-1}" for restrict
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline bool looks_like_json(const std::string& text) {
  auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && text[pos] == '{';
}

inline std::string input_field(const RunConfig& c, const std::string& text) {
  if (!c.field.empty()) return c.field;
  if (c.input.empty()) return "QQ";
  if (looks_like_json(text)) {
    try {
      return Json::parse(text).at("ring").value("field", std::string("QQ"));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), 1, 1);
    }
  }
  return read_header(text).field;
}

template <Field F>
SheafPresentation<F> load(const RunConfig& c, const std::string& text) {
  if (!c.fixture.empty() && !c.input.empty()) throw PreconditionError("give either --fixture or --input, not both");
  if (!c.fixture.empty()) return fixture<F>(c.fixture);
  if (c.input.empty()) throw PreconditionError("no presentation: use --fixture NAME or --input FILE");
  if (looks_like_json(text)) {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), 1, 1);
    }
    return presentation_from_json<F>(j, false);
  }
  return parse_presentation<F>(text, false);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(tailsheaf::detail::trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!tailsheaf::detail::trim(cur).empty()) out.push_back(tailsheaf::detail::trim(cur));
  return out;
}

template <Field F>
std::vector<F> parse_scalars(const std::string& s, char sep) {
  std::vector<F> out;
  for (const auto& tok : split(s, sep)) out.push_back(F::parse(tok));
  return out;
}

inline std::string yes(bool b) { return b ? "yes" : "no"; }

template <Field F>
void print_presentation(std::ostream& out, const SheafPresentation<F>& p, bool json) {
  if (json) out << to_json(p).dump(2) << "\n";
  else out << to_text(p);
}

template <Field F>
int cmd_validate(const RunConfig& c, const SheafPresentation<F>& p, std::ostream& out) {
  validate_presentation(p, c.seed);
  auto inj = check_injective(p, c.seed);
  if (c.json) {
    out << Json{{"schema", kSchemaVersion}, {"valid", true}, {"n", p.n()}, {"rows", p.rows()}, {"cols", p.cols()},
                {"rank", p.rank()}, {"exact_injectivity_check", inj.used_exact_fallback}}
               .dump(2)
        << "\n";
  } else {
    out << "valid: n=" << p.n() << " s=" << p.rows() << " q=" << p.cols() << " rank=" << p.rank() << "\n";
    out << "injective: yes (" << (inj.used_exact_fallback ? "exact minor check" : "full rank at random points") << ")\n";
  }
  return kOk;
}

template <Field F>
int cmd_cohomology(const RunConfig& c, const SheafPresentation<F>& p, std::ostream& out) {
  auto [lo, hi] = default_window(p);
  int tmin = c.tmin.value_or(lo), tmax = c.tmax.value_or(hi);
  auto tab = cohomology_table(p, tmin, tmax, parse_engine(c.engine), c.threads);
  for (const auto& e : euler_check(p, tab))
    if (!e.pass())
      throw InconsistencyError("Euler identity fails at t = " + std::to_string(e.t) + ": alternating sum " +
                               std::to_string(e.alternating_sum) + ", chi " + std::to_string(e.chi));
  if (c.json) out << to_json(tab).dump(2) << "\n";
  else if (c.csv) out << to_csv(tab);
  else out << to_text(tab);
  return kOk;
}

template <Field F>
int cmd_classify(const RunConfig& c, const SheafPresentation<F>& p, std::ostream& out) {
  auto cl = classify_tail(p);
  auto bound = rank_bound_check(p, cl.m);
  if (c.json) {
    auto j = to_json(cl);
    if (cl.is_tail) j["rank_bound"] = Json{{"rank", bound.rank}, {"bound", bound.bound}, {"holds", bound.holds}, {"tight", bound.tight}};
    out << j.dump(2) << "\n";
    return kOk;
  }
  const int top = p.n() - 1;
  out << "tail: " << yes(cl.is_tail) << "\n";
  if (cl.is_tail) {
    out << "m: " << cl.m << "\nk: " << cl.k << "\n";
    out << "normalized: " << yes(cl.normalized) << "\nminimal: " << yes(cl.minimal) << "\nlevel: " << yes(cl.level) << "\n";
    out << "rank bound: " << bound.rank << " >= " << bound.bound << (bound.holds ? " holds" : " FAILS") << (bound.tight ? " (tight)" : "") << "\n";
  } else {
    for (auto [t, h] : cl.witness) out << "witness: h^" << top << "(F(" << t << ")) = " << h << "\n";
  }
  out << "certificate: " << cl.certificate << "\n";
  return kOk;
}

inline int cmd_sing(const RunConfig& c, const SheafPresentation<Rational>& p, std::ostream& out) {
  auto r = singular_locus(p);
  if (c.json) {
    out << to_json(r).dump(2) << "\n";
    return kOk;
  }
  out << "F0: (";
  for (std::size_t i = 0; i < r.f0.basis().size(); ++i) out << (i ? ", " : "") << r.f0.basis()[i].to_string();
  out << ")\n";
  out << "locus: " << to_string(r.locus.kind);
  if (r.locus.dimension >= 0) out << ", dimension " << r.locus.dimension;
  if (r.locus.dimension == 0) out << ", length " << r.locus.length;
  out << "\n";
  for (const auto& pt : r.locus.points) out << "  point " << pt.to_string() << " multiplicity " << pt.multiplicity << "\n";
  if (r.locus.unresolved_length) out << "  length without rational points: " << r.locus.unresolved_length << "\n";
  out << "Ext length: " << (r.ext_length >= 0 ? std::to_string(r.ext_length) : "infinite") << "\n";
  out << "codim >= 3: " << yes(r.codim_at_least_3) << "\n" << r.note << "\n";
  return kOk;
}

template <Field F>
int cmd_restrict(const RunConfig& c, const SheafPresentation<F>& p, std::ostream& out) {
  auto r = c.hyperplane.empty() ? restrict_hyperplane(p, c.seed) : restrict_hyperplane(p, parse_scalars<F>(c.hyperplane, ','));
  std::optional<TangentRecognition<F>> tangent;
  try {
    tangent = recognize_tangent_power(r.presentation);
  } catch (const PreconditionError&) {
  }
  if (c.json) {
    auto j = to_json(r);
    if (tangent) j["tangent_power"] = to_json(*tangent);
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "hyperplane: " << hyperplane_to_string(r.coefficients) << " (attempt " << r.attempts << ")\n";
  out << "certificate: " << r.certificate << "\n";
  if (tangent) {
    if (tangent->success) out << "restriction: T(" << tangent->twist << ")^" << tangent->m << " on P^" << p.n() - 1 << "\n";
    else out << "restriction: not a sum of tangent bundles (" << tangent->reason << ")\n";
  }
  out << to_text(r.presentation);
  return kOk;
}

inline int cmd_peel(const RunConfig& c, const SheafPresentation<Rational>& p, std::ostream& out) {
  auto r = peel(p);
  if (c.json) {
    out << to_json(r).dump(2) << "\n";
    return kOk;
  }
  out << "point: " << tailsheaf::detail::point_to_string(r.point) << "\nrow: " << r.row << "\n";
  out << "transformed:\n" << to_text(r.transformed);
  out << "quotient:\n";
  if (r.quotient.rows() == 0) out << "(empty)\n";
  else out << to_text(r.quotient);
  return kOk;
}

inline int cmd_decompose(const RunConfig& c, const SheafPresentation<Rational>& p, std::ostream& out) {
  auto d = decompose(p, c.seed);
  if (c.json) {
    out << to_json(d).dump(2) << "\n";
    return kOk;
  }
  out << "blocks: " << d.blocks.size() << "\n";
  for (const auto& s : d.stages) out << "stage: " << s << "\n";
  for (std::size_t i = 0; i < d.blocks.size(); ++i) {
    const auto& b = d.blocks[i];
    out << "block " << i << ": m=" << b.m << " point " << tailsheaf::detail::point_to_string(b.point) << "\n" << to_text(b.presentation);
  }
  return kOk;
}

template <Field F>
int cmd_split_level(const RunConfig& c, const SheafPresentation<F>& p, std::ostream& out) {
  auto s = split_level(p);
  if (c.json) {
    out << to_json(s).dump(2) << "\n";
  } else {
    out << "m: " << s.m << "\nsummands:";
    if (s.summands.empty()) out << " none";
    for (int b : s.summands) out << " O(" << b << ")";
    out << "\nverified: " << yes(s.verified) << " (" << s.diagnostics << ")\n";
    out << "minimal part:\n" << to_text(s.minimal_part);
  }
  if (!s.verified) throw InconsistencyError("split verification failed: " + s.diagnostics);
  return kOk;
}

template <Field F>
SheafPresentation<F> build(const RunConfig& c) {
  const std::string& k = c.kind;
  if (k == "s1") return s1<F>(c.n);
  if (k == "euler") return euler_tangent<F>(c.n);
  if (k == "curvilinear") return curvilinear<F>(c.n, c.m);
  if (k == "points") {
    std::vector<std::vector<F>> pts;
    for (const auto& tok : split(c.points, ';')) pts.push_back(parse_scalars<F>(tok, ':'));
    if (pts.empty()) throw PreconditionError("--points needs at least one point");
    return points_block<F>(c.n, pts);
  }
  if (k == "fat-point") {
    std::vector<Poly<F>> gens;
    for (const auto& tok : split(c.ideal, ',')) gens.push_back(parse_poly<F>(tok, c.n));
    if (gens.empty()) throw PreconditionError("--ideal needs generators in x0..x" + std::to_string(c.n - 1));
    auto la = local_algebra<F>(c.n, gens);
    return from_local_algebra<F>(la);
  }
  if (k == "fixture") return fixture<F>(c.fixture);
  throw PreconditionError("unknown construction '" + k + "' (s1, euler, curvilinear, points, fat-point, fixture)");
}

template <Field F>
int dispatch(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.command == "construct") {
    print_presentation(out, build<F>(c), c.json);
    return kOk;
  }
  auto p = load<F>(c, text);
  if (c.command == "validate") return cmd_validate(c, p, out);
  if (c.command == "cohomology") return cmd_cohomology(c, p, out);
  if (c.command == "classify") return cmd_classify(c, p, out);
  if (c.command == "restrict") return cmd_restrict(c, p, out);
  if (c.command == "split-level") return cmd_split_level(c, p, out);
  if constexpr (std::is_same_v<F, Rational>) {
    if (c.command == "sing") return cmd_sing(c, p, out);
    if (c.command == "peel") return cmd_peel(c, p, out);
    if (c.command == "decompose") return cmd_decompose(c, p, out);
  } else {
    throw PreconditionError("'" + c.command + "' needs exact rational arithmetic (--field QQ)");
  }
  throw PreconditionError("unhandled command '" + c.command + "'");
}

}  // namespace detail

inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    std::string text = c.input.empty() || c.command == "construct" ? std::string() : detail::read_file(c.input);
    std::string field = c.command == "construct" ? (c.field.empty() ? "QQ" : c.field) : detail::input_field(c, text);
    if (field == "QQ") return detail::dispatch<Rational>(c, text, out);
    if (field.rfind("fp:", 0) == 0) {
      long long prime = 0;
      try {
        prime = std::stoll(field.substr(3));
      } catch (const std::exception&) {
        throw ParseError("bad field '" + field + "'", 1, 1);
      }
      if (prime < 2 || prime > 4294967291LL) throw ParseError("prime out of range in '" + field + "'", 1, 1);
      err << "note: computing over " << field << "; ranks mod p only bound the rational ranks from below, so results are not certificates\n";
      PrimeFieldScope scope(static_cast<std::uint32_t>(prime));
      return detail::dispatch<Zp>(c, text, out);
    }
    throw ParseError("unknown field '" + field + "' (QQ or fp:<prime>)", 1, 1);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ValidationError& e) {
    err << "invalid presentation: " << e.what() << "\n";
    return kInvalid;
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << "\n";
    return kPrecondition;
  } catch (const InconsistencyError& e) {
    err << "inconsistency: " << e.what() << "\n";
    return kMismatch;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cohomology, classification and structure of tail sheaves on projective space", "tailsheaf"};
  app.require_subcommand(1, 1);
  RunConfig c;
  auto common = [&](CLI::App* s, bool presentation_input) {
    if (presentation_input) {
      s->add_option("--fixture", c.fixture, "named built-in presentation");
      s->add_option("--input", c.input, "presentation file (text or JSON)");
    }
    s->add_flag("--json", c.json, "JSON output");
    s->add_option("--field", c.field, "QQ or fp:<prime>");
    s->add_option("--seed", c.seed, "seed for random choices");
  };
  auto* validate = app.add_subcommand("validate", "parse and validate a presentation");
  common(validate, true);
  auto* coh = app.add_subcommand("cohomology", "table of h^i(F(t))");
  common(coh, true);
  coh->add_flag("--csv", c.csv, "CSV output");
  coh->add_option("--tmin", c.tmin, "first twist");
  coh->add_option("--tmax", c.tmax, "last twist");
  coh->add_option("--engine", c.engine, "dense, groebner or both")->check(CLI::IsMember({"dense", "groebner", "both"}));
  coh->add_option("--threads", c.threads, "worker threads for the dense engine")->check(CLI::PositiveNumber);
  auto* classify = app.add_subcommand("classify", "decide whether F is an m-tail");
  common(classify, true);
  auto* sing = app.add_subcommand("sing", "Fitting ideal and singular points");
  common(sing, true);
  auto* restrict = app.add_subcommand("restrict", "restrict to a hyperplane missing the singular locus");
  common(restrict, true);
  restrict->add_option("--hyperplane", c.hyperplane, "c0,..,c_{n-1} for x_n = sum c_i x_i");
  auto* peel = app.add_subcommand("peel", "split off one S_1 at a singular point");
  common(peel, true);
  auto* dec = app.add_subcommand("decompose", "split a minimal tail by singular point");
  common(dec, true);
  auto* split = app.add_subcommand("split-level", "split a level tail into S_m plus line bundles");
  common(split, true);
  auto* construct = app.add_subcommand("construct", "print a constructed presentation");
  common(construct, false);
  construct->add_option("kind", c.kind, "s1, euler, curvilinear, points, fat-point, fixture")->required();
  construct->add_option("--fixture", c.fixture, "fixture name for 'fixture'");
  construct->add_option("--n", c.n, "dimension of P^n");
  construct->add_option("--m", c.m, "tail height for curvilinear");
  construct->add_option("--points", c.points, "points as a0:..:an;b0:..:bn");
  construct->add_option("--ideal", c.ideal, "comma-separated generators in x0..x_{n-1}");

  std::vector<const char*> argv{"tailsheaf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }
  c.command = app.get_subcommands().front()->get_name();
  return run(c, out, err);
}

}  // namespace tailsheaf::cli
