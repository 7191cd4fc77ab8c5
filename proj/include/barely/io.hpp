#pragma once

// Text formats shared by the command-line tool and the tests.
//
// Family document (JSON):
//   {"ground_size": N, "entries": [{"index": "p/q", "set": [n0, n1, ...]}, ...]}
// Entries are written in increasing index order with canonical "p/q" indices,
// sets as strictly increasing integer lists. Parsing then writing a canonical
// document reproduces it byte for byte.
//
// Reports (adjustment receipts, triple tables, harness trajectories) are
// tab-separated with one header row; summary lines start with '#'.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "barely/adjuster.hpp"
#include "barely/chain_core.hpp"
#include "barely/errors.hpp"
#include "barely/generators.hpp"
#include "barely/index_value.hpp"
#include "barely/line_operator.hpp"

namespace barely::io {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

inline void require_object(const Json& j, std::string_view what, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw InputError(std::string(what) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw InputError(std::string(what) + ": unknown key '" + key + "'");
  }
}

inline const Json& require_key(const Json& j, std::string_view what, const std::string& key) {
  if (!j.contains(key)) throw InputError(std::string(what) + ": missing key '" + key + "'");
  return j.at(key);
}

inline std::uint64_t as_unsigned(const Json& j, std::string_view what) {
  if (!j.is_number_unsigned()) throw InputError(std::string(what) + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

inline Rational as_rational(const Json& j, std::string_view what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw InputError(std::string(what) + ": expected a rational string \"p/q\"");
}

inline IndexValue as_index(const Json& j, std::string_view what) { return IndexValue(as_rational(j, what)); }

inline std::vector<IndexValue> as_index_list(const Json& j, std::string_view what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": expected a list of rationals");
  std::vector<IndexValue> out;
  for (const auto& e : j) out.push_back(as_index(e, what));
  return out;
}

inline SetBits as_set(const Json& j, std::size_t ground_size, std::string_view what) {
  if (!j.is_array()) throw InputError(std::string(what) + ": set must be an integer list");
  SetBits s(ground_size);
  std::int64_t previous = -1;
  for (const auto& e : j) {
    const auto n = as_unsigned(e, what);
    if (static_cast<std::int64_t>(n) <= previous) {
      throw InputError(std::string(what) + ": set elements must be strictly increasing");
    }
    if (n >= ground_size) {
      throw InputError(std::string(what) + ": element " + std::to_string(n) + " outside ground of size " +
                       std::to_string(ground_size));
    }
    s.insert(n);
    previous = static_cast<std::int64_t>(n);
  }
  return s;
}

inline Json set_json(const SetBits& s) {
  Json arr = Json::array();
  for (std::size_t n : s.elements()) arr.push_back(n);
  return arr;
}

inline std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Families

inline Json family_json(const ChainFamily& family) {
  Json j;
  j["ground_size"] = family.ground_size();
  Json entries = Json::array();
  for (std::size_t i = 0; i < family.size(); ++i) {
    Json e;
    e["index"] = family.index(i).to_string();
    e["set"] = detail::set_json(family.set(i));
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

inline std::string write_family(const ChainFamily& family) { return family_json(family).dump(2) + "\n"; }

struct ParsedFamily {
  ChainFamily family;
  std::vector<IndexValue> listed_order;  // entry order as written in the document
};

inline ParsedFamily family_from_json(const Json& j) {
  constexpr std::string_view what = "family document";
  detail::require_object(j, what, {"ground_size", "entries"});
  const auto n = detail::as_unsigned(detail::require_key(j, what, "ground_size"), what);
  if (n == 0) throw InputError("family document: ground_size must be positive");
  const Json& entries = detail::require_key(j, what, "entries");
  if (!entries.is_array()) throw InputError("family document: entries must be a list");
  std::vector<FamilyEntry> parsed;
  std::vector<IndexValue> order;
  for (const auto& e : entries) {
    detail::require_object(e, "family entry", {"index", "set"});
    IndexValue x = detail::as_index(detail::require_key(e, "family entry", "index"), "family entry index");
    SetBits s = detail::as_set(detail::require_key(e, "family entry", "set"), n, "family entry set");
    order.push_back(x);
    parsed.push_back({std::move(x), std::move(s)});
  }
  return {ChainFamily(GroundSet(n), std::move(parsed)), std::move(order)};
}

inline ParsedFamily parse_family(std::string_view text) {
  return family_from_json(detail::parse_json(text, "family document"));
}

// ---------------------------------------------------------------------------
// Reports

inline std::string write_adjustment_report(const AdjustmentReport& report) {
  std::ostringstream os;
  os << "index\tcost\tdelta\n";
  for (const auto& r : report.receipts) {
    os << r.inserted_index << '\t' << r.cost() << '\t' << detail::join(r.delta_from_input.elements()) << '\n';
  }
  os << "# total_cost=" << report.total_cost << " max_cost=" << report.max_cost << '\n';
  return os.str();
}

inline std::string write_triple_table(const TripleTable& table) {
  std::ostringstream os;
  os << "n\tentry\texit\treentry\tpattern\n";
  for (std::size_t n = 0; n < table.rows.size(); ++n) {
    const Triple& t = table.rows[n];
    os << n << '\t' << t.entry << '\t' << t.exit << '\t' << t.reentry << '\t' << to_string(t.pattern()) << '\n';
  }
  return os.str();
}

inline std::string write_harness_report(const HarnessReport& report) {
  std::ostringstream os;
  os << "stage\tn\tentry\texit\treentry\tpattern\tvalue\n";
  for (const auto& row : report.trajectory) {
    os << row.step.stage << '\t' << row.step.n << '\t' << row.triple.entry << '\t' << row.triple.exit << '\t'
       << row.triple.reentry << '\t' << to_string(row.triple.pattern()) << '\t' << format_rational(row.value)
       << '\n';
  }
  os << "# limit_point=" << report.point << " f_limit=" << format_rational(report.value_at_point)
     << " final_value=" << format_rational(report.final_value)
     << " identity=" << (report.identity_holds ? "ok" : "fail") << '\n';
  return os.str();
}

inline std::string write_gap_report(const GapInterpolation& g) {
  std::ostringstream os;
  os << "interpolant\t" << detail::join(g.interpolant.elements()) << '\n';
  os << "side\ti\texception\tallowance\n";
  for (std::size_t n = 0; n < g.lower_exceptions.size(); ++n) {
    os << "lower\t" << n << '\t' << detail::join(g.lower_exceptions[n].elements()) << '\t'
       << detail::join(g.lower_allowance[n].elements()) << '\n';
  }
  for (std::size_t m = 0; m < g.upper_exceptions.size(); ++m) {
    os << "upper\t" << m << '\t' << detail::join(g.upper_exceptions[m].elements()) << '\t'
       << detail::join(g.upper_allowance[m].elements()) << '\n';
  }
  os << "# within_allowance=" << (g.exceptions_within_allowance() ? "ok" : "fail") << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Other inputs

struct GapInput {
  std::vector<SetBits> lower;
  std::vector<SetBits> upper;
};

/// {"ground_size": N, "lower": [[...], ...], "upper": [[...], ...]}
inline GapInput parse_gap(std::string_view text) {
  constexpr std::string_view what = "gap document";
  const Json j = detail::parse_json(text, what);
  detail::require_object(j, what, {"ground_size", "lower", "upper"});
  const auto n = detail::as_unsigned(detail::require_key(j, what, "ground_size"), what);
  if (n == 0) throw InputError("gap document: ground_size must be positive");
  GapInput g;
  for (const auto& [key, out] : {std::pair{"lower", &g.lower}, std::pair{"upper", &g.upper}}) {
    const Json& tower = detail::require_key(j, what, key);
    if (!tower.is_array()) throw InputError("gap document: towers must be lists of sets");
    for (const auto& s : tower) out->push_back(detail::as_set(s, n, what));
  }
  return g;
}

/// {"carrier": ["p/q", ...], "dense": ["p/q", ...]}
inline LineModel parse_model(std::string_view text) {
  constexpr std::string_view what = "model document";
  const Json j = detail::parse_json(text, what);
  detail::require_object(j, what, {"carrier", "dense"});
  return LineModel(detail::as_index_list(detail::require_key(j, what, "carrier"), what),
                   detail::as_index_list(detail::require_key(j, what, "dense"), what));
}

/// {"values": {"p/q": "r/s", ...}}
inline FunctionOnLine parse_function(std::string_view text, const LineModel& model) {
  constexpr std::string_view what = "function document";
  const Json j = detail::parse_json(text, what);
  detail::require_object(j, what, {"values"});
  const Json& values = detail::require_key(j, what, "values");
  if (!values.is_object()) throw InputError("function document: values must map points to rationals");
  std::map<IndexValue, Rational> v;
  for (const auto& [point, value] : values.items()) {
    if (!v.emplace(IndexValue::parse(point), detail::as_rational(value, what)).second) {
      throw InputError("function document: point " + point + " given twice");
    }
  }
  return FunctionOnLine(model, std::move(v));
}

/// {"schedule": [{"n": 3, "stage": 0}, ...]}
inline std::vector<ScheduleStep> parse_schedule(std::string_view text) {
  constexpr std::string_view what = "schedule document";
  const Json j = detail::parse_json(text, what);
  detail::require_object(j, what, {"schedule"});
  const Json& steps = detail::require_key(j, what, "schedule");
  if (!steps.is_array()) throw InputError("schedule document: schedule must be a list");
  std::vector<ScheduleStep> out;
  for (const auto& s : steps) {
    detail::require_object(s, "schedule step", {"n", "stage"});
    out.push_back({detail::as_unsigned(detail::require_key(s, what, "n"), what),
                   detail::as_unsigned(detail::require_key(s, what, "stage"), what)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generator configs
//
//   {"kind": "initial_segment" | "marciszewski" | "perturbed" | "sign_matrix",
//    "seed": 0, "ground_size": N, "depth": d, "X": ["p/q", ...], "xs": ["0110...", ...],
//    "parameters": {...}}
//
// Random index sets are drawn when X / xs are absent and parameters.count is given.

struct GeneratorConfig {
  std::string kind;
  std::uint64_t seed = 0;
  std::optional<std::size_t> ground_size;
  std::optional<unsigned> depth;
  std::optional<std::vector<IndexValue>> indices;
  std::optional<std::vector<BitIndex>> words;
  Json parameters = Json::object();
};

inline GeneratorConfig parse_generator_config(std::string_view text) {
  constexpr std::string_view what = "generator config";
  const Json j = detail::parse_json(text, what);
  detail::require_object(j, what, {"kind", "seed", "ground_size", "depth", "X", "xs", "parameters"});
  GeneratorConfig c;
  const Json& kind = detail::require_key(j, what, "kind");
  if (!kind.is_string()) throw InputError("generator config: kind must be a string");
  c.kind = kind.get<std::string>();
  if (j.contains("seed")) c.seed = detail::as_unsigned(j.at("seed"), what);
  if (j.contains("ground_size")) c.ground_size = detail::as_unsigned(j.at("ground_size"), what);
  if (j.contains("depth")) c.depth = static_cast<unsigned>(detail::as_unsigned(j.at("depth"), what));
  if (j.contains("X")) c.indices = detail::as_index_list(j.at("X"), what);
  if (j.contains("xs")) {
    if (!j.at("xs").is_array()) throw InputError("generator config: xs must be a list of bit words");
    std::vector<BitIndex> words;
    for (const auto& w : j.at("xs")) {
      if (!w.is_string()) throw InputError("generator config: bit words must be strings");
      words.push_back(BitIndex::parse(w.get<std::string>()));
    }
    c.words = std::move(words);
  }
  if (j.contains("parameters")) {
    if (!j.at("parameters").is_object()) throw InputError("generator config: parameters must be an object");
    c.parameters = j.at("parameters");
  }
  return c;
}

namespace detail {

inline std::size_t parameter(const GeneratorConfig& c, const std::string& key, std::size_t fallback) {
  if (!c.parameters.contains(key)) return fallback;
  return as_unsigned(c.parameters.at(key), "generator parameter " + key);
}

inline void allow_parameters(const GeneratorConfig& c, std::initializer_list<std::string_view> allowed) {
  require_object(c.parameters, "generator parameters (" + c.kind + ")", allowed);
}

}  // namespace detail

inline ChainFamily generate(const GeneratorConfig& c) {
  DeterministicRng rng(c.seed);
  auto need_ground = [&]() {
    if (!c.ground_size) throw InputError("generator config: " + c.kind + " needs ground_size");
    return *c.ground_size;
  };
  auto indices_or_random = [&](const std::vector<IndexValue>& avoid) {
    if (c.indices) return *c.indices;
    if (!c.parameters.contains("count")) throw InputError("generator config: give X or parameters.count");
    return random_indices(rng, detail::parameter(c, "count", 0), avoid);
  };

  if (c.kind == "initial_segment") {
    detail::allow_parameters(c, {"count", "points"});
    std::vector<IndexValue> points;
    if (c.parameters.contains("points")) {
      points = detail::as_index_list(c.parameters.at("points"), "generator parameter points");
    } else {
      points = uniform_points(need_ground());
    }
    if (c.ground_size && *c.ground_size != points.size()) {
      throw InputError("generator config: ground_size disagrees with the number of points");
    }
    return initial_segment_chain(points, indices_or_random(points));
  }
  if (c.kind == "marciszewski") {
    detail::allow_parameters(c, {"count", "extra_bits"});
    if (!c.depth) throw InputError("generator config: marciszewski needs depth");
    DyadicGround ground(*c.depth);
    if (c.words) return marciszewski_family(*c.words, ground);
    if (!c.parameters.contains("count")) throw InputError("generator config: give xs or parameters.count");
    auto extra = static_cast<unsigned>(detail::parameter(c, "extra_bits", 8));
    return marciszewski_family(random_bit_indices(rng, *c.depth, detail::parameter(c, "count", 0), extra), ground);
  }
  if (c.kind == "perturbed") {
    detail::allow_parameters(c, {"count", "flips_per_set"});
    const std::size_t n = need_ground();
    auto xs = indices_or_random(uniform_points(n));
    return perturbed_chain(c.seed, n, xs, detail::parameter(c, "flips_per_set", 0));
  }
  if (c.kind == "sign_matrix") {
    detail::allow_parameters(c, {"matrix"});
    if (!c.indices) throw InputError("generator config: sign_matrix needs X");
    if (!c.parameters.contains("matrix") || !c.parameters.at("matrix").is_array()) {
      throw InputError("generator config: sign_matrix needs parameters.matrix (list of rows)");
    }
    std::vector<std::vector<Rational>> rows;
    for (const auto& row : c.parameters.at("matrix")) {
      if (!row.is_array()) throw InputError("generator config: matrix rows must be lists");
      std::vector<Rational> r;
      for (const auto& v : row) r.push_back(detail::as_rational(v, "sign matrix entry"));
      rows.push_back(std::move(r));
    }
    return from_sign_matrix(*c.indices, rows);
  }
  throw InputError("generator config: unknown kind '" + c.kind + "'");
}

}  // namespace barely::io
