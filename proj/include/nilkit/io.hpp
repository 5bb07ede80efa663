#pragma once

// Text and JSON formats shared by the command-line driver and the tests.
//
//   signal      const:<c> | char:a=<a1>[,<a2>...] | quadphase:a=<a> |
//               random:seed=<s> | sign:seed=<s> | csv:<path>
//   filtration  abelian:m=<m>,deg=<k> | abelian:levels=<l1>/<l2>/... |
//               heis:lcs | heis:x=<a>,y=<b>,z=<c>
//   circle map  poly:<den>:<c0>,<c1>,... (x -> sum c_j x^j / den on Z_N) |
//               values:<v0>,<v1>,...
//   poly JSON   [[coords of g_0], [coords of g_1], ...], coordinates as "p/q"
//               strings or integers; or {"coefficients": [...]}
//   nilseq JSON {"carrier": "abelian"|"heis", "filtration": <spec or levels>,
//               "coefficients": <poly>, "F": <expr>, "period": N,
//               "lipschitz": L (optional)}

#include <istream>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "nilkit/cocycle.hpp"
#include "nilkit/filtered_group.hpp"
#include "nilkit/gowers.hpp"
#include "nilkit/nilmanifold.hpp"

namespace nilkit {

using json = nlohmann::ordered_json;

using AnyFilteredGroup = std::variant<FilteredGroup<AbelianGroup>, FilteredGroup<Heisenberg>>;
using AnyPolySeq = std::variant<PolySeq<AbelianGroup>, PolySeq<Heisenberg>>;
using AnyNilsequence = std::variant<Nilsequence<AbelianGroup>, Nilsequence<Heisenberg>>;

/// key=value pairs after "<kind>:", comma separated.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text);

Signal parse_signal(const FiniteAbelianGroup& group, std::string_view spec);
/// Lines "index,re,im"; blank lines and lines starting with '#' are skipped.
/// Every index of the group must appear exactly once.
Signal read_signal_csv(const FiniteAbelianGroup& group, std::istream& in);

AnyFilteredGroup parse_filtration(std::string_view spec);
std::string filtration_spec(const AnyFilteredGroup& group);

CircleMap parse_circle_map(const FiniteAbelianGroup& group, std::string_view spec);

json rational_to_json(const Rational& r);
/// Accepts "p/q" strings and JSON integers. path names the field in errors.
Rational rational_from_json(const json& j, const std::string& path);

/// Inline JSON when text starts with '{' or '[', otherwise a file name.
json load_json_argument(std::string_view text);

template <Carrier C>
json element_to_json(const C& carrier, const typename C::Element& g) {
  json out = json::array();
  const RationalVector c = carrier.coordinates(g);
  for (Eigen::Index j = 0; j < c.size(); ++j) out.push_back(rational_to_json(c(j)));
  return out;
}

template <Carrier C>
typename C::Element element_from_json(const C& carrier, const json& j, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != carrier.dimension()) {
    throw ParseError(path + ": expected an array of " + std::to_string(carrier.dimension()) +
                     " coordinates");
  }
  RationalVector c(carrier.dimension());
  for (int k = 0; k < carrier.dimension(); ++k) {
    c(k) = rational_from_json(j[k], path + "[" + std::to_string(k) + "]");
  }
  return carrier.from_coordinates(c);
}

template <Carrier C>
json poly_to_json(const PolySeq<C>& g) {
  json out = json::array();
  for (const auto& c : g.coefficients()) out.push_back(element_to_json(g.group().carrier(), c));
  return out;
}

/// Throws ParseError with the field path, or FiltrationError when a
/// coefficient is outside its level.
template <Carrier C>
PolySeq<C> poly_from_json(const FilteredGroup<C>& group, const json& j,
                          const std::string& path = "coefficients") {
  const json& arr = j.is_object() && j.contains("coefficients") ? j.at("coefficients") : j;
  if (!arr.is_array() || arr.empty()) throw ParseError(path + ": expected a nonempty array");
  std::vector<typename C::Element> coeffs;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    coeffs.push_back(
        element_from_json(group.carrier(), arr[i], path + "[" + std::to_string(i) + "]"));
  }
  return PolySeq<C>(group, std::move(coeffs));
}

AnyPolySeq poly_from_json(const AnyFilteredGroup& group, const json& j);
json poly_to_json(const AnyPolySeq& g);

AnyNilsequence nilseq_from_json(const json& j);
json nilseq_to_json(const AnyNilsequence& ns);

json cube_to_json(const FiniteAbelianGroup& group, const GroupCube& q);
GroupCube cube_from_json(const FiniteAbelianGroup& group, const json& j);
json cube_key_to_json(const FiniteAbelianGroup& group, const CubeKey& key);

}  // namespace nilkit
