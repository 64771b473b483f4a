#pragma once

// JSON encoding of exact scalars: {"num": "...", "den": "...", "radicand": "..."}
// with decimal strings, so nothing passes through binary floating point.

#include "orthofam/exact/bigrat.hpp"
#include "orthofam/exact/radical.hpp"
#include "orthofam/exact/radical_sum.hpp"

#include <json.hpp>

#include <vector>

namespace orthofam {

using Json = nlohmann::ordered_json;

inline Json to_json_scalar(const Radical& r) {
  return Json{{"num", r.coeff().get_num().get_str()},
              {"den", r.coeff().get_den().get_str()},
              {"radicand", r.radicand().get_str()}};
}

inline Json to_json_scalar(const BigRat& q) { return to_json_scalar(Radical(q)); }

inline std::string json_string_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_string())
    throw DomainError(std::string("scalar is missing string field '") + key + "'");
  return j.at(key).get<std::string>();
}

/// Parses a scalar and rejects non-canonical encodings, so a file that
/// round-trips is byte-stable.
inline Radical radical_from_json(const Json& j) {
  const BigInt num = parse_int(json_string_field(j, "num"));
  const BigInt den = parse_int(json_string_field(j, "den"));
  const BigInt rad = parse_int(json_string_field(j, "radicand"));
  if (den <= 0) throw DomainError("scalar denominator must be positive");
  const BigRat q = make_rat(num, den);
  if (q.get_num() != num || q.get_den() != den) throw DomainError("scalar fraction is not reduced");
  if (rad < 1) throw DomainError("scalar radicand must be positive");
  if (!is_square_free(rad)) throw DomainError("scalar radicand " + rad.get_str() + " is not square-free");
  if (q == 0 && rad != 1) throw DomainError("zero scalar must have radicand 1");
  return Radical::from_normalized(q, rad);
}

inline BigRat rational_from_json(const Json& j) {
  const Radical r = radical_from_json(j);
  if (!r.is_rational()) throw DomainError("expected a rational scalar, got " + r.str());
  return r.coeff();
}

inline Json to_json_sum(const RadicalSum& s) {
  Json arr = Json::array();
  for (const auto& r : s.as_radicals()) arr.push_back(to_json_scalar(r));
  return arr;
}

inline RadicalSum sum_from_json(const Json& j) {
  if (!j.is_array()) throw DomainError("sum must be an array of scalars");
  RadicalSum s;
  for (const auto& e : j) s += radical_from_json(e);
  return s;
}

inline Json to_json_vec(const std::vector<Radical>& v) {
  Json arr = Json::array();
  for (const auto& r : v) arr.push_back(to_json_scalar(r));
  return arr;
}

inline Json to_json_vec(const std::vector<BigRat>& v) {
  Json arr = Json::array();
  for (const auto& q : v) arr.push_back(to_json_scalar(q));
  return arr;
}

inline std::vector<Radical> radical_vec_from_json(const Json& j) {
  if (!j.is_array()) throw DomainError("vector must be an array of scalars");
  std::vector<Radical> out;
  for (const auto& e : j) out.push_back(radical_from_json(e));
  return out;
}

inline std::vector<BigRat> rational_vec_from_json(const Json& j) {
  if (!j.is_array()) throw DomainError("vector must be an array of scalars");
  std::vector<BigRat> out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

}  // namespace orthofam
