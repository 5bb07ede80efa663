// nilkit command-line driver: one experiment per invocation, JSON or CSV out.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "nilkit/balance.hpp"
#include "nilkit/cocycle.hpp"
#include "nilkit/finprob.hpp"
#include "nilkit/gowers.hpp"
#include "nilkit/io.hpp"
#include "nilkit/nilmanifold.hpp"

using namespace nilkit;

namespace {

constexpr int kSchemaVersion = 1;
constexpr double kNormTolerance = 1e-9;

struct Settings {
  std::string group = "Z5";
  std::string signal = "const:1";
  std::vector<int> d{2};
  std::string method = "auto";
  unsigned workers = 1;
  std::string filtration;
  std::string poly;
  std::string F = "e(x)";
  std::int64_t period = 0;
  std::string nilseq;
  std::vector<double> grid{1.0, 0.5, 0.34};
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::uint64_t budget = kDefaultBudget;
  std::string out;
  std::string format = "json";
  bool strict = false;
  int k = 1;
  std::string map;
  std::string target;
  std::string mode = "enumerate";
  std::vector<std::string> deltas{"1/100", "1/10", "1/4"};
  std::string rule = "one-vertex";
  std::string perturb;
  std::vector<std::string> phi;
  bool exact = false;
  int R = kDefaultTruncation;
  int bootstrap = 16;
  std::string lemma = "all";
  std::uint64_t instances = 1000;
  int window = 12;
  std::int64_t a = 1;
};

json settings_json(const Settings& s, const std::string& command) {
  json j;
  j["command"] = command;
  j["group"] = s.group;
  j["signal"] = s.signal;
  j["d"] = s.d;
  j["method"] = s.method;
  j["filtration"] = s.filtration;
  j["poly"] = s.poly;
  j["F"] = s.F;
  j["period"] = s.period;
  j["nilseq"] = s.nilseq;
  j["grid"] = s.grid;
  j["samples"] = s.samples;
  if (s.seed_given) j["seed"] = s.seed;
  else j["seed"] = nullptr;
  j["budget"] = s.budget;
  j["format"] = s.format;
  j["strict"] = s.strict;
  j["k"] = s.k;
  j["map"] = s.map;
  j["target"] = s.target;
  j["mode"] = s.mode;
  j["deltas"] = s.deltas;
  j["rule"] = s.rule;
  j["perturb"] = s.perturb;
  j["phi"] = s.phi;
  j["exact"] = s.exact;
  j["R"] = s.R;
  j["bootstrap"] = s.bootstrap;
  j["lemma"] = s.lemma;
  j["instances"] = s.instances;
  j["window"] = s.window;
  j["a"] = s.a;
  return j;
}

/// Invalid field value; field is the flag name.
struct ValidationError : Error {
  ValidationError(std::string f, const std::string& what) : Error(what), field(std::move(f)) {}
  std::string field;
};

void require_seed(const Settings& s) {
  if (!s.seed_given) throw ValidationError("seed", "--seed is required for sampled computations");
}

Mode parse_mode(const std::string& m) {
  if (m == "enumerate") return Mode::Enumerate;
  if (m == "sample") return Mode::Sample;
  throw ValidationError("mode", "expected enumerate or sample");
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}}; }

// ---------------------------------------------------------------------------
// Nilsequence inputs: --nilseq, or --filtration with --poly, --F and --period.

AnyNilsequence load_nilsequence(const Settings& s) {
  if (!s.nilseq.empty()) {
    try {
      return nilseq_from_json(load_json_argument(s.nilseq));
    } catch (const ParseError& e) {
      throw ValidationError("nilseq", e.what());
    }
  }
  if (s.filtration.empty() || s.poly.empty() || s.period < 1) {
    throw ValidationError("nilseq", "give --nilseq, or --filtration, --poly and --period");
  }
  json j;
  const AnyFilteredGroup g = parse_filtration(s.filtration);
  j["carrier"] = std::holds_alternative<FilteredGroup<Heisenberg>>(g) ? "heis" : "abelian";
  j["filtration"] = filtration_spec(g);
  j["coefficients"] = load_json_argument(s.poly);
  j["F"] = s.F;
  j["period"] = s.period;
  return nilseq_from_json(j);
}

AnyPolySeq load_poly(const Settings& s) {
  if (s.filtration.empty()) throw ValidationError("filtration", "--filtration is required");
  if (s.poly.empty()) throw ValidationError("poly", "--poly is required");
  const AnyFilteredGroup g = parse_filtration(s.filtration);
  return poly_from_json(g, load_json_argument(s.poly));
}

// ---------------------------------------------------------------------------

json run_gowers(const Settings& s) {
  const auto group = FiniteAbelianGroup::parse(s.group);
  const Signal f = parse_signal(group, s.signal);
  const std::set<std::string> methods{"auto", "naive", "recursive", "fft", "all"};
  if (!methods.count(s.method)) throw ValidationError("method", "unknown method " + s.method);
  json table = json::array();
  for (int d : s.d) {
    if (d < 1) throw ValidationError("d", "d must be >= 1");
    json row;
    row["d"] = d;
    const bool naive_fits = cube_count(group, d) <= s.budget;
    std::string method = s.method;
    if (method == "auto") method = d == 1 || naive_fits ? "naive" : "recursive";
    if (method == "fft" && d != 2) throw ValidationError("method", "fft evaluates U^2 only");
    if ((method == "recursive" || method == "fft") && d < 2) {
      throw ValidationError("d", "the recursive evaluator needs d >= 2");
    }
    if (method == "all") {
      const double naive = u_norm_naive(f, d, s.budget);
      row["naive"] = naive;
      double diff = 0.0;
      if (d >= 2) {
        const double rec = u_norm_recursive(f, d, s.workers);
        row["recursive"] = rec;
        diff = std::abs(naive - rec);
      }
      if (d == 2) {
        const double fft = u2_fourier(f);
        row["fft"] = fft;
        diff = std::max(diff, std::abs(naive - fft));
      }
      row["norm"] = naive;
      row["max_abs_diff"] = diff;
      row["agree"] = diff <= kNormTolerance;
    } else if (method == "naive") {
      row["norm"] = u_norm_naive(f, d, s.budget);
    } else if (method == "recursive") {
      row["norm"] = u_norm_recursive(f, d, s.workers);
    } else {
      row["norm"] = u2_fourier(f);
    }
    row["method"] = method;
    table.push_back(row);
  }
  json r;
  r["group_order"] = group.order();
  r["signal_bound"] = f.bound();
  r["l2_norm_squared"] = l2_norm_squared(f);
  r["tolerance"] = kNormTolerance;
  r["clamp_tolerance"] = kClampTolerance;
  r["table"] = table;
  return r;
}

json run_nilseq(const Settings& s) {
  const AnyNilsequence any = load_nilsequence(s);
  return std::visit(
      [&](const auto& ns) {
        const auto& c = ns.poly.group().carrier();
        json table = json::array();
        for (std::int64_t x = 0; x < ns.period; ++x) {
          const auto rep = reduce(c, poly_eval(ns.poly, x));
          const Complex v = ns.F(nil_coordinates(c, rep));
          table.push_back({{"x", x},
                           {"re", v.real()},
                           {"im", v.imag()},
                           {"coordinates", element_to_json(c, rep)}});
        }
        const auto per = is_p_periodic(ns.poly, ns.period, 2 * ns.period);
        PolyCheckOptions po{s.window, static_cast<int>(std::min<std::uint64_t>(s.samples, 1 << 20)),
                            s.seed};
        json r;
        r["nilsequence"] = nilseq_to_json(any);
        r["periodicity"] = {{"window", 2 * ns.period},
                            {"window_ok", per.window_ok},
                            {"algebraic_ok", per.algebraic_ok ? json(*per.algebraic_ok) : json()},
                            {"counterexample",
                             per.counterexample ? json(*per.counterexample) : json()},
                            {"periodic", per.periodic()}};
        r["polynomiality"] = {{"ok", is_poly_check(ns.poly.group(), as_map(ns.poly), po)},
                              {"window", po.window},
                              {"samples", po.samples},
                              {"seed", po.seed}};
        const int lip_samples = static_cast<int>(std::min<std::uint64_t>(s.samples, 100000));
        r["F"] = {{"sup_bound", ns.F.sup_bound()},
                  {"lipschitz_declared", ns.lipschitz},
                  {"lipschitz_estimate", ns.F.lipschitz_estimate(c.dimension(), lip_samples, s.seed)},
                  {"lipschitz_samples", lip_samples}};
        r["table"] = table;
        return r;
      },
      any);
}

json run_correlate(const Settings& s) {
  const AnyNilsequence any = load_nilsequence(s);
  return std::visit(
      [&](const auto& ns) {
        const auto group = FiniteAbelianGroup::parse(s.group);
        if (!group.is_cyclic() || group.order() != ns.period) {
          throw ValidationError("group", "the signal must live on Z_" + std::to_string(ns.period));
        }
        const Signal f = parse_signal(group, s.signal);
        const Correlation corr = correlate(f, ns, s.strict);
        json r;
        r["correlation"] = complex_json(corr.value);
        r["periodic"] = corr.periodic;
        r["warnings"] = corr.warnings;
        r["l2_norm_squared"] = l2_norm_squared(f);
        r["summation"] = "pairwise, double precision";
        return r;
      },
      any);
}

json run_lift(const Settings& s) {
  if (s.period < 1) throw ValidationError("period", "--period is required");
  const AnyPolySeq any = load_poly(s);
  return std::visit(
      [&](const auto& g) {
        const auto& group = g.group();
        const auto& c = group.carrier();
        const auto phi = phi_table(g, s.period);
        json r;
        r["input"] = poly_to_json(g);
        MorphismCheckOptions mo{static_cast<int>(std::min<std::uint64_t>(s.samples, 1 << 20)),
                                s.seed};
        r["morphism_check"] = {{"ok", morphism_check(phi, group, std::max(group.degree(), 0) + 1, mo)},
                               {"samples", mo.samples},
                               {"seed", mo.seed}};
        try {
          const auto lifted = lift_morphism(phi, group);
          bool ok = true;
          for (std::int64_t x = 0; x < 2 * s.period; ++x) {
            if (!c.equal(reduce(c, poly_eval(lifted, x)), phi[x % s.period])) ok = false;
          }
          r["lift"] = poly_to_json(lifted);
          r["roundtrip"] = {{"window", 2 * s.period}, {"ok", ok}, {"exact", true}};
        } catch (const LiftError& e) {
          r["lift"] = nullptr;
          r["lift_error"] = {{"level", e.level()}, {"message", e.what()}};
        }
        return r;
      },
      any);
}

json violation_json(const FiniteAbelianGroup& group, const Violation& v) {
  json cubes = json::array();
  for (const auto& k : v.cubes) cubes.push_back(cube_key_to_json(group, k));
  return {{"axiom", v.axiom},
          {"cubes", cubes},
          {"detail", v.detail},
          {"expected", rational_to_json(v.expected)},
          {"actual", rational_to_json(v.actual)}};
}

CircleTarget parse_circle_target(const std::string& t) {
  if (t.empty() || t == "circle" || t == "T") return CircleTarget::circle();
  try {
    const auto g = FiniteAbelianGroup::parse(t);
    if (g.is_cyclic()) return CircleTarget::cyclic(g.order());
  } catch (const ParseError&) {
  }
  throw ValidationError("target", "expected circle or Z<m>");
}

json run_cocycle(const Settings& s, const std::string& sub) {
  const auto group = FiniteAbelianGroup::parse(s.group);
  if (s.map.empty()) throw ValidationError("map", "--map is required");
  const CircleMap g = parse_circle_map(group, s.map);
  const CircleTarget target = parse_circle_target(s.target);
  SamplingOptions opt;
  opt.mode = parse_mode(s.mode);
  opt.samples = s.samples;
  opt.seed = s.seed;
  opt.budget = s.budget;
  if (opt.mode == Mode::Sample) require_seed(s);
  json r;
  r["mode"] = s.mode;
  r["target"] = target.to_string();
  if (opt.mode == Mode::Sample) r["samples"] = s.samples;
  if (sub == "defect") {
    std::vector<Rational> deltas;
    for (const auto& d : s.deltas) deltas.push_back(parse_rational(d));
    CorrectionRule rule = CorrectionRule::OneVertex;
    if (s.rule == "spread") rule = CorrectionRule::Spread;
    else if (s.rule != "one-vertex") throw ValidationError("rule", "expected one-vertex or spread");
    const auto rows = quasimorphism_defect(group, g, s.k, deltas, opt, rule, target);
    json table = json::array();
    for (const auto& row : rows) {
      table.push_back({{"delta", rational_to_json(row.delta)},
                       {"cubes", row.cubes},
                       {"failures", row.failures},
                       {"failure_fraction", row.failure_fraction},
                       {"quasi", row.quasi}});
    }
    r["rule"] = s.rule;
    r["table"] = table;
    return r;
  }
  Cocycle rho = coboundary_from(group, g, s.k, target);
  if (!s.perturb.empty()) {
    const GroupCube q = cube_from_json(group, load_json_argument(s.perturb));
    const Rational shift = target.modulus == 0 ? Rational(1, 2) : Rational(1, target.modulus);
    rho = rho.perturbed(q, rho(q) + shift);
    r["perturbed"] = {{"cube", cube_to_json(group, q)}, {"shift", rational_to_json(shift)}};
  }
  if (sub == "check") {
    const AxiomReport rep = check_cocycle_axioms(rho, opt);
    json vs = json::array();
    for (const auto& v : rep.violations) vs.push_back(violation_json(group, v));
    r["pass"] = rep.pass();
    r["vacuous"] = rep.vacuous;
    r["automorphism_checks"] = rep.automorphism_checks;
    r["concatenation_checks"] = rep.concatenation_checks;
    r["violation_count"] = rep.violation_count;
    r["violations"] = vs;
    r["arithmetic"] = "exact";
  } else {
    const D1Result d1 = d1_to_zero(rho, opt);
    r["value"] = d1.value;
    r["exact"] = d1.exact ? rational_to_json(*d1.exact) : json();
    r["cubes"] = d1.cubes;
  }
  return r;
}

BalanceTarget parse_balance_target(const std::string& t) {
  if (t.empty()) return BalanceTarget::torus(1, 1);
  if (t == "heis" || t == "heis:lcs") return BalanceTarget::heisenberg();
  const auto colon = t.find(':');
  if (t.substr(0, colon) == "torus") {
    int m = 1, k = 1;
    if (colon != std::string::npos) {
      for (const auto& [key, v] : parse_key_values(t.substr(colon + 1))) {
        if (key == "m") m = std::stoi(v);
        else if (key == "k") k = std::stoi(v);
        else throw ValidationError("target", "unknown key " + key);
      }
    }
    if (m < 1 || k < 1) throw ValidationError("target", "m and k must be >= 1");
    return BalanceTarget::torus(m, k);
  }
  throw ValidationError("target", "expected torus:m=<m>,k=<k> or heis");
}

PointMap parse_point_map(const std::string& spec, const BalanceTarget& target) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "linear" || kind == "const") {
    if (target.kind != BalanceTarget::Kind::Torus || target.m != 1) {
      throw ValidationError("phi", kind + " maps land in the circle (torus:m=1)");
    }
    std::int64_t p = 0, a = 1;
    Rational c = 0;
    for (const auto& [key, v] : parse_key_values(rest)) {
      if (key == "p") p = std::stoll(v);
      else if (key == "a" && kind == "linear") a = std::stoll(v);
      else if (key == "c" && kind == "const") c = frac(parse_rational(v));
      else throw ValidationError("phi", "unknown key " + key);
    }
    if (p < 1) throw ValidationError("phi", "p must be >= 1");
    if (kind == "linear") return linear_circle_map(p, a);
    return PointMap(static_cast<std::size_t>(p), std::vector<double>{to_double(c)});
  }
  if (kind == "nilseq") {
    const AnyNilsequence any = nilseq_from_json(load_json_argument(rest));
    return std::visit(
        [&](const auto& ns) {
          const auto& c = ns.poly.group().carrier();
          if (c.dimension() != target.coordinates() ||
              (c.name() == "heis") != (target.kind == BalanceTarget::Kind::Heisenberg)) {
            throw ValidationError("phi", "nilsequence carrier does not match the target");
          }
          PointMap out;
          for (std::int64_t x = 0; x < ns.period; ++x) {
            out.push_back(nil_coordinates(c, reduce(c, poly_eval(ns.poly, x))));
          }
          return out;
        },
        any);
  }
  throw ValidationError("phi", "expected linear:p=..,a=.., const:p=..,c=.. or nilseq:<file>");
}

json run_balance(const Settings& s) {
  if (s.phi.empty()) throw ValidationError("phi", "--phi is required");
  if (!s.exact) require_seed(s);
  const BalanceTarget target = parse_balance_target(s.target);
  BalanceOptions opt;
  opt.samples = s.samples;
  opt.seed = s.seed;
  opt.R = s.R;
  opt.bootstrap = s.bootstrap;
  opt.exact = s.exact;
  json table = json::array(), verdicts = json::array();
  for (const auto& spec : s.phi) {
    const PointMap phi = parse_point_map(spec, target);
    const BalanceResult res = balance_of(target, phi, s.grid, opt);
    for (const auto& row : res.table) {
      table.push_back({{"phi", spec},
                       {"b", row.b},
                       {"n", row.n},
                       {"d", row.d},
                       {"spread", row.spread},
                       {"pass", row.pass}});
    }
    json v = json::array();
    for (const auto& [b, ok] : res.verdicts) v.push_back({{"b", b}, {"pass", ok}});
    verdicts.push_back({{"phi", spec},
                        {"verdicts", v},
                        {"smallest_b", res.smallest_b ? json(*res.smallest_b) : json()}});
  }
  json r;
  r["target"] = target.to_string();
  r["metric"] = {{"family", "characters up to sign, L1 then descending lex"},
                 {"R", s.R},
                 {"truncation_bound", std::ldexp(1.0, 1 - s.R)}};
  r["estimator"] = s.exact ? json{{"mode", "exact"}}
                           : json{{"mode", "sampled"},
                                  {"samples", s.samples},
                                  {"seed", s.seed},
                                  {"bootstrap", s.bootstrap}};
  r["table"] = table;
  r["verdicts"] = verdicts;
  return r;
}

json run_finprob(const Settings& s) {
  require_seed(s);
  std::vector<std::string> lemmas;
  if (s.lemma == "all") lemmas = {"B1", "B2", "B3"};
  else if (s.lemma == "B1" || s.lemma == "B2" || s.lemma == "B3") lemmas = {s.lemma};
  else throw ValidationError("lemma", "expected B1, B2, B3 or all");
  json table = json::array();
  for (const auto& l : lemmas) {
    const SuiteReport rep = l == "B1"   ? run_level_set_suite(s.seed, s.instances)
                            : l == "B2" ? run_intersection_suite(s.seed, s.instances)
                                        : run_invariant_suite(s.seed, s.instances);
    table.push_back({{"lemma", rep.lemma},
                     {"instances", rep.instances},
                     {"violations", rep.violations},
                     {"violating_instances", rep.violating_instances},
                     {"worst_ratio", rep.worst_ratio}});
  }
  json r;
  r["arithmetic"] = "exact rational thresholds";
  r["seed"] = s.seed;
  r["table"] = table;
  return r;
}

json run_inverse_demo(const Settings& s) {
  const std::int64_t p = s.period > 0 ? s.period : 31;
  // x -> a x^2 / p on Q with Taylor coefficients (0, a/p, 2a/p), F = e(x).
  FilteredGroup<AbelianGroup> group(AbelianGroup(1), Filtration({2}));
  auto coord = [](const Rational& r) {
    RationalVector v(1);
    v(0) = r;
    return v;
  };
  const Rational ap(s.a, p);
  Nilsequence<AbelianGroup> ns{PolySeq<AbelianGroup>(group, {coord(0), coord(ap), coord(2 * ap)}),
                               FExpr::parse(s.F.empty() ? "e(x)" : s.F), p, 2 * M_PI};
  validate(ns);
  const Signal f = nilsequence_signal(ns);
  const Correlation corr = correlate(f, ns, s.strict);
  const int k = 2;
  const int power = 1 << (k + 1);
  const double u3 = u_norm_recursive(f, k + 1, s.workers);
  const double l2 = l2_norm_squared(f);
  const double u3_power = std::pow(u3, power);
  json deltas = json::array();
  bool all = true;
  for (double delta : {1.0, 0.75, 0.5, 0.25, 0.1}) {
    const double rhs = std::pow(delta, power) / 2.0;
    const bool ok = std::abs(corr.value) >= rhs;
    all = all && ok;
    deltas.push_back({{"delta", delta}, {"bound", rhs}, {"holds", ok}});
  }
  json r;
  r["nilsequence"] = nilseq_to_json(ns);
  r["correlation"] = complex_json(corr.value);
  r["periodic"] = corr.periodic;
  r["u3_norm"] = u3;
  r["l2_norm_squared"] = l2;
  r["chain"] = {{"correlation_equals_l2", std::abs(corr.value - Complex(l2)) <= kNormTolerance},
                {"l2_ge_u_power", l2 >= u3_power - kNormTolerance},
                {"u_power", u3_power},
                {"tolerance", kNormTolerance}};
  r["inequality"] = {{"table", deltas}, {"holds", all}};
  return r;
}

// ---------------------------------------------------------------------------

std::string csv_cell(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_null()) return "";
  if (v.is_structured()) return csv_cell(json(v.dump()));
  return v.dump();
}

std::string to_csv(const json& result) {
  std::ostringstream out;
  if (result.contains("table") && result["table"].is_array() && !result["table"].empty()) {
    const json& t = result["table"];
    std::vector<std::string> cols;
    for (const auto& row : t) {
      for (const auto& [key, val] : row.items()) {
        if (std::find(cols.begin(), cols.end(), key) == cols.end()) cols.push_back(key);
      }
    }
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (const auto& row : t) {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << (row.contains(cols[i]) ? csv_cell(row[cols[i]]) : "");
      }
      out << "\n";
    }
    return out.str();
  }
  out << "key,value\n";
  const json flat = result.flatten();
  for (const auto& [key, val] : flat.items()) out << key << "," << csv_cell(val) << "\n";
  return out.str();
}

void emit(const Settings& s, const std::string& text) {
  if (s.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(s.out);
  if (!f) throw ValidationError("out", "cannot write " + s.out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nilkit: higher-order Fourier analysis experiments"};
  app.set_version_flag("--version", NILKIT_VERSION);
  app.set_config("--config", "", "key=value file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;

  app.add_option("--group", s.group, "finite abelian group, e.g. Z5 or Z2xZ3")->capture_default_str();
  app.add_option("--signal", s.signal, "signal spec or csv:<path>")->capture_default_str();
  app.add_option("--d", s.d, "norm degrees, comma separated")->delimiter(',')->capture_default_str();
  app.add_option("--method", s.method, "auto|naive|recursive|fft|all")->capture_default_str();
  app.add_option("--workers", s.workers, "threads for the recursive evaluator")->capture_default_str();
  app.add_option("--filtration", s.filtration, "abelian:m=..,deg=.. | heis:lcs | heis:x=..,y=..,z=..");
  app.add_option("--poly", s.poly, "Taylor coefficients as JSON (inline or file)");
  app.add_option("--F", s.F, "output function expression")->capture_default_str();
  app.add_option("--period", s.period, "period p");
  app.add_option("--nilseq", s.nilseq, "nilsequence JSON (inline or file)");
  app.add_option("--grid", s.grid, "balance grid b values")->delimiter(',')->capture_default_str();
  app.add_option("--samples", s.samples, "sample count")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", s.seed, "master seed (required when sampling)");
  app.add_option("--budget", s.budget, "enumeration budget")->capture_default_str();
  app.add_option("--out", s.out, "output file (default stdout)");
  app.add_option("--format", s.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_flag("--strict", s.strict, "turn warnings into errors");
  app.add_option("--k", s.k, "cocycle degree")->capture_default_str();
  app.add_option("--map", s.map, "circle map: poly:<den>:<c0>,.. | values:<v0>,..");
  app.add_option("--target", s.target, "cocycle: circle|Z<m>; balance: torus:m=..,k=..|heis");
  app.add_option("--mode", s.mode, "enumerate|sample")->capture_default_str();
  app.add_option("--deltas", s.deltas, "defect thresholds")->delimiter(',')->capture_default_str();
  app.add_option("--rule", s.rule, "one-vertex|spread")->capture_default_str();
  app.add_option("--perturb", s.perturb, "cube (JSON) whose cocycle value is shifted");
  app.add_option("--phi", s.phi, "balance maps: linear:p=..,a=.. | const:p=..,c=.. | nilseq:<file>");
  app.add_flag("--exact", s.exact, "exact balance integration (small p)");
  app.add_option("--R", s.R, "metric truncation")->capture_default_str();
  app.add_option("--bootstrap", s.bootstrap, "bootstrap resamples")->capture_default_str();
  app.add_option("--lemma", s.lemma, "B1|B2|B3|all")->capture_default_str();
  app.add_option("--instances", s.instances, "suite size")->capture_default_str();
  app.add_option("--window", s.window, "polynomiality window")->capture_default_str();
  app.add_option("--a", s.a, "inverse-demo coefficient")->capture_default_str();

  auto* gowers = app.add_subcommand("gowers", "U^d norms of a signal");
  auto* nilseq = app.add_subcommand("nilseq", "evaluate a nilsequence on Z_p");
  auto* correlate_cmd = app.add_subcommand("correlate", "correlation of a signal with a nilsequence");
  auto* lift = app.add_subcommand("lift", "lift a map Z_p -> G/Gamma to a polynomial sequence");
  auto* cocycle = app.add_subcommand("cocycle", "cocycle axioms, distance to zero, defects");
  cocycle->require_subcommand(1);
  auto* c_check = cocycle->add_subcommand("check", "cocycle axioms");
  auto* c_d1 = cocycle->add_subcommand("d1", "average distance to the zero cocycle");
  auto* c_defect = cocycle->add_subcommand("defect", "quasimorphism defect table");
  auto* balance = app.add_subcommand("balance", "balance tables");
  auto* finprob = app.add_subcommand("finprob", "finite probability lemma suites");
  finprob->require_subcommand(1);
  auto* demo = finprob->add_subcommand("demo", "run seeded suites");
  auto* inverse = app.add_subcommand("inverse-demo", "matched quadratic nilsequence on Z_p");
  for (auto* sub : {c_check, c_d1, c_defect, demo}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  s.seed_given = seed_opt->count() > 0;

  std::string command;
  const auto start = std::chrono::steady_clock::now();
  try {
    json result;
    if (gowers->parsed()) {
      command = "gowers";
      result = run_gowers(s);
    } else if (nilseq->parsed()) {
      command = "nilseq";
      result = run_nilseq(s);
    } else if (correlate_cmd->parsed()) {
      command = "correlate";
      result = run_correlate(s);
    } else if (lift->parsed()) {
      command = "lift";
      result = run_lift(s);
    } else if (cocycle->parsed()) {
      const std::string sub = c_check->parsed() ? "check" : c_d1->parsed() ? "d1" : "defect";
      command = "cocycle " + sub;
      result = run_cocycle(s, sub);
    } else if (balance->parsed()) {
      command = "balance";
      result = run_balance(s);
    } else if (finprob->parsed()) {
      command = "finprob demo";
      result = run_finprob(s);
    } else if (inverse->parsed()) {
      command = "inverse-demo";
      result = run_inverse_demo(s);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (s.format == "csv") {
      emit(s, to_csv(result));
    } else {
      json report;
      report["schema_version"] = kSchemaVersion;
      report["tool"] = "nilkit";
      report["version"] = NILKIT_VERSION;
      report["command"] = command;
      report["inputs"] = settings_json(s, command);
      report["result"] = result;
      report["wall_time_s"] = wall;
      emit(s, report.dump(2) + "\n");
    }
    return 0;
  } catch (const std::exception& e) {
    json err;
    err["schema_version"] = kSchemaVersion;
    err["tool"] = "nilkit";
    err["command"] = command;
    json detail{{"message", e.what()}};
    int code = 1;
    if (auto* v = dynamic_cast<const ValidationError*>(&e)) {
      detail["type"] = "validation";
      detail["field"] = v->field;
      code = 2;
    } else if (auto* b = dynamic_cast<const BudgetExceeded*>(&e)) {
      detail["type"] = "budget";
      detail["required"] = b->required();
      detail["budget"] = b->budget();
      code = 3;
    } else if (auto* f = dynamic_cast<const FiltrationError*>(&e)) {
      detail["type"] = "filtration";
      detail["index"] = f->index();
      code = 2;
    } else if (auto* l = dynamic_cast<const LiftError*>(&e)) {
      detail["type"] = "lift";
      detail["level"] = l->level();
    } else if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const MismatchError*>(&e)) {
      detail["type"] = "validation";
      code = 2;
    } else {
      detail["type"] = "error";
    }
    err["error"] = detail;
    std::cerr << err.dump(2) << "\n";
    return code;
  }
}
