#include "nilkit/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace nilkit {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::int64_t parse_int(std::string_view text, const std::string& what) {
  const std::string t = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ParseError(what + ": expected an integer, got '" + t + "'");
  }
  return v;
}

double parse_double(std::string_view text, const std::string& what) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used == t.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(what + ": expected a number, got '" + t + "'");
}

std::pair<std::string, std::string> split_kind(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) return {trim(spec), ""};
  return {trim(spec.substr(0, colon)), std::string(spec.substr(colon + 1))};
}

const std::string& require(const std::vector<std::pair<std::string, std::string>>& kv,
                           const std::string& key, const std::string& spec) {
  for (const auto& [k, v] : kv) {
    if (k == key) return v;
  }
  throw ParseError(spec + ": missing '" + key + "='");
}

void reject_unknown(const std::vector<std::pair<std::string, std::string>>& kv,
                    std::initializer_list<std::string_view> known, const std::string& spec) {
  for (const auto& [k, v] : kv) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw ParseError(spec + ": unknown key '" + k + "'");
    }
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  if (trim(text).empty()) return out;
  // A value may itself contain commas ("a=1,2"): pieces without '=' extend
  // the previous value.
  for (const auto& piece : split(text, ',')) {
    const auto eq = piece.find('=');
    if (eq == std::string::npos) {
      if (out.empty()) throw ParseError("expected key=value, got '" + piece + "'");
      out.back().second += "," + piece;
    } else {
      out.emplace_back(trim(piece.substr(0, eq)), trim(piece.substr(eq + 1)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

Signal parse_signal(const FiniteAbelianGroup& group, std::string_view spec) {
  const std::string s(spec);
  const auto [kind, rest] = split_kind(spec);
  if (kind == "csv") {
    std::ifstream in(trim(rest));
    if (!in) throw ParseError(s + ": cannot open '" + trim(rest) + "'");
    return read_signal_csv(group, in);
  }
  if (kind == "const") {
    return Signal::constant(group, parse_double(rest.empty() ? "1" : rest, s));
  }
  const auto kv = parse_key_values(rest);
  if (kind == "char") {
    reject_unknown(kv, {"a"}, s);
    std::vector<std::int64_t> a;
    for (const auto& x : split(require(kv, "a", s), ',')) a.push_back(parse_int(x, s));
    if (static_cast<int>(a.size()) != group.rank()) {
      throw ParseError(s + ": need " + std::to_string(group.rank()) + " frequency entries");
    }
    return Signal::character(group, a);
  }
  if (kind == "quadphase") {
    reject_unknown(kv, {"a"}, s);
    return Signal::quadratic_phase(group, parse_int(require(kv, "a", s), s));
  }
  if (kind == "random" || kind == "sign") {
    reject_unknown(kv, {"seed"}, s);
    const auto seed = static_cast<std::uint64_t>(parse_int(require(kv, "seed", s), s));
    return kind == "random" ? Signal::random(group, seed) : Signal::random_sign(group, seed);
  }
  throw ParseError("unknown signal kind '" + kind + "'");
}

Signal read_signal_csv(const FiniteAbelianGroup& group, std::istream& in) {
  std::vector<Complex> values(static_cast<std::size_t>(group.order()));
  std::vector<bool> seen(values.size(), false);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = split(t, ',');
    const std::string where = "line " + std::to_string(lineno);
    if (fields.size() != 3) throw ParseError(where + ": expected index,re,im");
    const std::int64_t idx = parse_int(fields[0], where);
    if (idx < 0 || idx >= group.order()) throw ParseError(where + ": index out of range");
    if (seen[idx]) throw ParseError(where + ": duplicate index " + std::to_string(idx));
    seen[idx] = true;
    values[idx] = {parse_double(fields[1], where), parse_double(fields[2], where)};
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ParseError("signal misses index " + std::to_string(i));
  }
  return Signal(group, std::move(values));
}

// ---------------------------------------------------------------------------

AnyFilteredGroup parse_filtration(std::string_view spec) {
  const std::string s(spec);
  const auto [kind, rest] = split_kind(spec);
  if (kind == "abelian") {
    const auto kv = parse_key_values(rest);
    reject_unknown(kv, {"m", "deg", "levels"}, s);
    for (const auto& [k, v] : kv) {
      if (k == "levels") {
        std::vector<int> levels;
        for (const auto& x : split(v, '/')) levels.push_back(static_cast<int>(parse_int(x, s)));
        return FilteredGroup<AbelianGroup>(AbelianGroup(static_cast<int>(levels.size())),
                                           Filtration(levels));
      }
    }
    const int m = static_cast<int>(parse_int(require(kv, "m", s), s));
    const int deg = static_cast<int>(parse_int(require(kv, "deg", s), s));
    if (m < 1) throw ParseError(s + ": m must be >= 1");
    return FilteredGroup<AbelianGroup>(AbelianGroup(m), Filtration::uniform(m, deg));
  }
  if (kind == "heis") {
    if (trim(rest) == "lcs") return FilteredGroup<Heisenberg>(Heisenberg(), Filtration({1, 1, 2}));
    const auto kv = parse_key_values(rest);
    reject_unknown(kv, {"x", "y", "z"}, s);
    std::vector<int> levels;
    for (const char* k : {"x", "y", "z"}) {
      levels.push_back(static_cast<int>(parse_int(require(kv, k, s), s)));
    }
    return FilteredGroup<Heisenberg>(Heisenberg(), Filtration(levels));
  }
  throw ParseError("unknown filtration kind '" + kind + "'");
}

std::string filtration_spec(const AnyFilteredGroup& group) {
  return std::visit(
      [](const auto& g) {
        const auto& l = g.filtration().levels();
        std::string out;
        if (g.carrier().name() == "heis") {
          out = "heis:x=" + std::to_string(l[0]) + ",y=" + std::to_string(l[1]) +
                ",z=" + std::to_string(l[2]);
        } else {
          out = "abelian:levels=";
          for (std::size_t j = 0; j < l.size(); ++j) {
            out += (j ? "/" : "") + std::to_string(l[j]);
          }
        }
        return out;
      },
      group);
}

CircleMap parse_circle_map(const FiniteAbelianGroup& group, std::string_view spec) {
  const std::string s(spec);
  const auto [kind, rest] = split_kind(spec);
  CircleMap out;
  if (kind == "values") {
    for (const auto& x : split(rest, ',')) out.push_back(frac(parse_rational(x)));
    if (static_cast<std::int64_t>(out.size()) != group.order()) {
      throw ParseError(s + ": need " + std::to_string(group.order()) + " values");
    }
    return out;
  }
  if (kind == "poly") {
    if (!group.is_cyclic()) throw ParseError(s + ": poly maps need a cyclic group");
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw ParseError(s + ": expected poly:<den>:<c0>,<c1>,...");
    const Integer den = parse_int(rest.substr(0, colon), s);
    if (den == 0) throw ParseError(s + ": zero denominator");
    std::vector<Rational> c;
    for (const auto& x : split(rest.substr(colon + 1), ',')) c.push_back(parse_rational(x));
    for (std::int64_t x = 0; x < group.order(); ++x) {
      Rational acc = 0, pw = 1;
      for (const auto& cj : c) {
        acc += cj * pw;
        pw *= x;
      }
      out.push_back(frac(acc / Rational(den)));
    }
    return out;
  }
  throw ParseError("unknown map kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

json rational_to_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
  throw ParseError(path + ": expected a \"p/q\" string or an integer");
}

json load_json_argument(std::string_view text) {
  const std::string t = trim(text);
  try {
    if (!t.empty() && (t[0] == '{' || t[0] == '[')) return json::parse(t);
    std::ifstream in(t);
    if (!in) throw ParseError("cannot open '" + t + "'");
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

AnyPolySeq poly_from_json(const AnyFilteredGroup& group, const json& j) {
  return std::visit([&](const auto& g) -> AnyPolySeq { return poly_from_json(g, j); }, group);
}

json poly_to_json(const AnyPolySeq& g) {
  return std::visit([](const auto& p) { return poly_to_json(p); }, g);
}

AnyNilsequence nilseq_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("nilsequence: expected an object");
  for (const char* key : {"carrier", "filtration", "coefficients", "F", "period"}) {
    if (!j.contains(key)) throw ParseError(std::string("nilsequence: missing field '") + key + "'");
  }
  if (!j["carrier"].is_string()) throw ParseError("carrier: expected a string");
  const std::string carrier = j["carrier"].get<std::string>();
  const json& f = j["filtration"];
  AnyFilteredGroup group = FilteredGroup<AbelianGroup>(AbelianGroup(1), Filtration({0}));
  if (f.is_string()) {
    const std::string fs = f.get<std::string>();
    group = parse_filtration(fs.find(':') == std::string::npos ? carrier + ":" + fs : fs);
  } else if (f.is_array()) {
    std::vector<int> levels;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!f[i].is_number_integer()) {
        throw ParseError("filtration[" + std::to_string(i) + "]: expected an integer");
      }
      levels.push_back(f[i].get<int>());
    }
    if (carrier == "heis") {
      group = FilteredGroup<Heisenberg>(Heisenberg(), Filtration(levels));
    } else if (carrier == "abelian") {
      group = FilteredGroup<AbelianGroup>(AbelianGroup(static_cast<int>(levels.size())),
                                          Filtration(levels));
    } else {
      throw ParseError("carrier: unknown carrier '" + carrier + "'");
    }
  } else {
    throw ParseError("filtration: expected a spec string or an array of levels");
  }
  const bool heis = std::holds_alternative<FilteredGroup<Heisenberg>>(group);
  if ((carrier == "heis") != heis) {
    throw ParseError("filtration: does not match carrier '" + carrier + "'");
  }
  if (!j["F"].is_string()) throw ParseError("F: expected an expression string");
  if (!j["period"].is_number_integer()) throw ParseError("period: expected an integer");
  FExpr F = [&] {
    try {
      return FExpr::parse(j["F"].get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(std::string("F: ") + e.what());
    }
  }();
  const std::int64_t period = j["period"].get<std::int64_t>();
  double lipschitz = 0.0;
  if (j.contains("lipschitz")) {
    if (!j["lipschitz"].is_number()) throw ParseError("lipschitz: expected a number");
    lipschitz = j["lipschitz"].get<double>();
  }
  return std::visit(
      [&](const auto& g) -> AnyNilsequence {
        using C = std::decay_t<decltype(g.carrier())>;
        Nilsequence<C> ns{poly_from_json(g, j["coefficients"]), F, period, lipschitz};
        validate(ns);
        return ns;
      },
      group);
}

json nilseq_to_json(const AnyNilsequence& ns) {
  return std::visit(
      [](const auto& n) {
        json out;
        out["carrier"] = n.poly.group().carrier().name();
        out["filtration"] = n.poly.group().filtration().levels();
        out["coefficients"] = poly_to_json(n.poly);
        out["F"] = n.F.text();
        out["period"] = n.period;
        out["lipschitz"] = n.lipschitz;
        return out;
      },
      ns);
}

// ---------------------------------------------------------------------------

namespace {

json element_json(const FiniteAbelianGroup& group, const FiniteAbelianGroup::Element& x) {
  if (group.is_cyclic()) return x(0);
  json out = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) out.push_back(x(i));
  return out;
}

}  // namespace

json cube_to_json(const FiniteAbelianGroup& group, const GroupCube& q) {
  json out = json::array();
  for (Vertex v = 0; v < q.size(); ++v) out.push_back(element_json(group, q[v]));
  return out;
}

json cube_key_to_json(const FiniteAbelianGroup& group, const CubeKey& key) {
  json out = json::array();
  for (auto idx : key) out.push_back(element_json(group, group.element(idx)));
  return out;
}

GroupCube cube_from_json(const FiniteAbelianGroup& group, const json& j) {
  if (!j.is_array() || j.empty() || (j.size() & (j.size() - 1)) != 0) {
    throw ParseError("cube: expected an array of 2^n vertex values");
  }
  const int n = std::countr_zero(j.size());
  std::vector<FiniteAbelianGroup::Element> values;
  for (std::size_t v = 0; v < j.size(); ++v) {
    const std::string path = "cube[" + std::to_string(v) + "]";
    FiniteAbelianGroup::Element x(group.rank());
    if (j[v].is_number_integer() && group.is_cyclic()) {
      x(0) = j[v].get<std::int64_t>();
    } else if (j[v].is_array() && static_cast<int>(j[v].size()) == group.rank()) {
      for (int i = 0; i < group.rank(); ++i) {
        if (!j[v][i].is_number_integer()) throw ParseError(path + ": expected integers");
        x(i) = j[v][i].get<std::int64_t>();
      }
    } else {
      throw ParseError(path + ": expected a group element");
    }
    if (!group.contains(x)) throw ParseError(path + ": residue out of range");
    values.push_back(x);
  }
  return GroupCube(n, std::move(values));
}

}  // namespace nilkit
