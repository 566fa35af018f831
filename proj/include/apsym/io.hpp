#pragma once

// JSON (de)serialization of specs, generators and hulls, and CSV output.
//
// TrigSpec schema:
//   {
//     "terms": [
//       {"freq": {"kind": "rational", "p": 1, "q": 4}, "amp": 1.0},
//       {"freq": {"kind": "irrational", "value": 0.41421356237309515, "label": "sqrt2-1"}, "amp": 0.7}
//     ],
//     "irrational_asserted": true,
//     "rationally_independent_asserted": true
//   }
// Rational frequencies are integer pairs, never floats.
//
// Generator schema: {"kind": "super_exponential", "B": 1} | {"kind": "inverse_square"}
//                 | {"kind": "finite", "coefficients": [a_1, ..., a_K]}
//
// Hull schema: {"model": "torus"}
//            | {"model": "profinite", "depth": K, "generator": {...}}
//            | {"model": "profinite", "tail_bound": t}   (term k must have frequency 1/k, k = 1..K)

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "apsym/errors.hpp"
#include "apsym/generator.hpp"
#include "apsym/hull.hpp"
#include "apsym/trig_spec.hpp"

namespace apsym {

using json = nlohmann::json;

namespace detail {

inline const json& require(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(path + "." + key + ": missing");
  return j.at(key);
}

inline double require_number(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number()) throw ValidationError(path + "." + key + ": expected a number");
  return v.get<double>();
}

inline std::int64_t require_integer(const json& j, const std::string& key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_number_integer()) throw ValidationError(path + "." + key + ": expected an integer");
  return v.get<std::int64_t>();
}

}  // namespace detail

inline json to_json(const Frequency& f) {
  if (f.is_rational()) return json{{"kind", "rational"}, {"p", f.p()}, {"q", f.q()}};
  return json{{"kind", "irrational"}, {"value", f.value_turns()}, {"label", f.label()}};
}

inline Frequency frequency_from_json(const json& j, const std::string& path) {
  const json& kind = detail::require(j, "kind", path);
  if (kind == "rational") {
    return Frequency::rational(detail::require_integer(j, "p", path), detail::require_integer(j, "q", path));
  }
  if (kind == "irrational") {
    const double v = detail::require_number(j, "value", path);
    const std::string label = j.contains("label") ? j.at("label").get<std::string>() : std::string{};
    try {
      return Frequency::irrational(v, label);
    } catch (const ValidationError& e) {
      throw ValidationError(path + ": " + e.what());
    }
  }
  throw ValidationError(path + ".kind: expected \"rational\" or \"irrational\"");
}

inline json to_json(const TrigSpec& spec) {
  json terms = json::array();
  for (const auto& t : spec.terms()) terms.push_back(json{{"freq", to_json(t.freq)}, {"amp", t.amp}});
  return json{{"terms", terms},
              {"irrational_asserted", spec.assertions().irrational},
              {"rationally_independent_asserted", spec.assertions().rationally_independent}};
}

inline TrigSpec spec_from_json(const json& j, const std::string& path = "spec") {
  const json& terms = detail::require(j, "terms", path);
  if (!terms.is_array()) throw ValidationError(path + ".terms: expected an array");
  SpecAssertions a;
  a.irrational = j.value("irrational_asserted", false);
  a.rationally_independent = j.value("rationally_independent_asserted", false);
  std::vector<Term> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tp = path + ".terms[" + std::to_string(i) + "]";
    Frequency f = frequency_from_json(detail::require(terms[i], "freq", tp), tp + ".freq");
    out.push_back(Term{std::move(f), detail::require_number(terms[i], "amp", tp)});
  }
  try {
    return TrigSpec(std::move(out), a);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline CoefficientGenerator generator_from_json(const json& j, const std::string& path = "hull.generator") {
  const json& kind = detail::require(j, "kind", path);
  if (kind == "super_exponential") return CoefficientGenerator::super_exponential(detail::require_number(j, "B", path));
  if (kind == "inverse_square") return CoefficientGenerator::inverse_square();
  if (kind == "finite") {
    const json& c = detail::require(j, "coefficients", path);
    if (!c.is_array() || c.empty()) throw ValidationError(path + ".coefficients: expected a non-empty array");
    return CoefficientGenerator::finite(c.get<std::vector<double>>());
  }
  throw ValidationError(path + ".kind: expected super_exponential, inverse_square or finite");
}

/// Generator for a profinite spec given explicitly: a_k from the terms
/// (frequency 1/k), tails sum_{m<k<=K} |a_k| + tail_bound.
inline CoefficientGenerator generator_from_profinite_spec(const TrigSpec& spec, double tail_bound, std::int64_t& depth) {
  depth = 0;
  std::vector<double> a;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto& f = spec.terms()[i].freq;
    const std::int64_t k = static_cast<std::int64_t>(i) + 1;
    const bool is_inverse_k = f.is_rational() && f.q() == k && f.p() == (k == 1 ? 0 : 1);
    if (!is_inverse_k) {
      throw ValidationError("spec.terms[" + std::to_string(i) + "]: profinite hull needs frequency 1/" +
                            std::to_string(k));
    }
    a.push_back(spec.terms()[i].amp);
  }
  depth = static_cast<std::int64_t>(a.size());
  return CoefficientGenerator(
      "explicit",
      [a](std::int64_t k) { return k <= static_cast<std::int64_t>(a.size()) ? a[static_cast<std::size_t>(k - 1)] : 0.0; },
      [a, tail_bound](std::int64_t m) {
        double s = tail_bound;
        for (std::size_t k = static_cast<std::size_t>(m); k < a.size(); ++k) s += std::fabs(a[k]);
        return s > 0.0 ? std::log(s) : -std::numeric_limits<double>::infinity();
      });
}

/// Shortest decimal that round-trips.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Comma-separated rows with a header; cells are preformatted.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row(header); }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw DimensionError("CSV row has wrong number of cells");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  std::size_t columns_;
  std::ostringstream out_;
};

inline std::string cell(double x) { return format_double(x); }
inline std::string cell(std::int64_t x) { return std::to_string(x); }
inline std::string cell(std::uint64_t x) { return std::to_string(x); }
inline std::string cell(bool b) { return b ? "1" : "0"; }

/// Sample dump: sample_id then r (profinite) or theta_1..theta_d (torus).
inline std::string samples_csv(const HullModel& hull, std::uint64_t seed, std::uint64_t n) {
  std::vector<std::string> header{"sample_id"};
  const bool profinite = std::holds_alternative<ProfiniteHull>(hull);
  if (profinite) {
    header.push_back("r");
  } else {
    for (std::size_t k = 1; k <= hull_spec(hull).size(); ++k) header.push_back("theta_" + std::to_string(k));
  }
  CsvWriter w(header);
  for (std::uint64_t i = 0; i < n; ++i) {
    SeededSampler s(seed, i);
    std::vector<std::string> row{cell(i)};
    if (profinite) {
      row.push_back(cell(haar_sample_residue(std::get<ProfiniteHull>(hull), s).value));
    } else {
      for (double v : haar_sample_torus(std::get<TorusHull>(hull), s).values()) row.push_back(cell(v));
    }
    w.row(row);
  }
  return w.str();
}

}  // namespace apsym
