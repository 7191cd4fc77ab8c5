#pragma once

// Extension operator on a finite model of a compact line K with a countable
// discrete part identified with the ground set. For each ground element n the
// barely alternating family determines three points of K,
//
//   entry   = min {y in Y : n in B_y}
//   exit    = min {y in Y : n not in B_y, y > entry}
//   reentry = min {y in Y : n in B_y, y > exit}
//
// with min(∅) = max(K), and Ef(n) = f(entry) - f(exit) + f(reentry).

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "barely/chain_core.hpp"
#include "barely/errors.hpp"
#include "barely/index_value.hpp"

namespace barely {

/// Finite linear order K (the carrier) with the index set Y ⊆ K.
class LineModel {
 public:
  LineModel(std::vector<IndexValue> carrier, std::vector<IndexValue> dense)
      : carrier_(std::move(carrier)), dense_(std::move(dense)) {
    if (carrier_.empty()) throw InputError("line model needs a nonempty carrier");
    if (!strictly_increasing(carrier_)) throw InputError("carrier must be strictly increasing");
    if (!strictly_increasing(dense_)) throw InputError("index set must be strictly increasing");
    for (const auto& y : dense_) {
      if (!contains(y)) throw InputError("index " + y.to_string() + " is not a carrier point");
    }
  }

  /// K = Y = the family's indices.
  static LineModel over(const ChainFamily& family) {
    return LineModel(family.indices(), family.indices());
  }

  /// K = Y ∪ {top}; top must lie above every index.
  static LineModel with_top(const ChainFamily& family, IndexValue top) {
    auto carrier = family.indices();
    if (!carrier.empty() && !(carrier.back() < top)) {
      throw InputError("top point " + top.to_string() + " must exceed every index");
    }
    carrier.push_back(std::move(top));
    return LineModel(std::move(carrier), family.indices());
  }

  const std::vector<IndexValue>& carrier() const { return carrier_; }
  const std::vector<IndexValue>& dense() const { return dense_; }
  const IndexValue& max_point() const { return carrier_.back(); }
  bool contains(const IndexValue& x) const { return std::binary_search(carrier_.begin(), carrier_.end(), x); }

 private:
  static bool strictly_increasing(const std::vector<IndexValue>& v) {
    return std::adjacent_find(v.begin(), v.end(), [](const auto& a, const auto& b) { return !(a < b); }) ==
           v.end();
  }

  std::vector<IndexValue> carrier_;
  std::vector<IndexValue> dense_;
};

enum class TriplePattern {
  collapsed,  // entry = exit = reentry
  left,       // entry < exit = reentry
  right,      // entry = exit < reentry
  strict,     // entry < exit < reentry
};

inline const char* to_string(TriplePattern p) {
  switch (p) {
    case TriplePattern::collapsed: return "collapsed";
    case TriplePattern::left: return "left";
    case TriplePattern::right: return "right";
    case TriplePattern::strict: return "strict";
  }
  return "?";
}

struct Triple {
  IndexValue entry;
  IndexValue exit;
  IndexValue reentry;

  bool ordered() const { return !(exit < entry) && !(reentry < exit); }
  TriplePattern pattern() const {
    if (entry == exit) return exit == reentry ? TriplePattern::collapsed : TriplePattern::right;
    return exit == reentry ? TriplePattern::left : TriplePattern::strict;
  }
  friend bool operator==(const Triple&, const Triple&) = default;
};

/// One triple per ground element.
struct TripleTable {
  std::vector<Triple> rows;
};

class NotBarelyAlternatingError : public InputError {
 public:
  explicit NotBarelyAlternatingError(AlternationWitness w)
      : InputError("family is not barely alternating: n=" + std::to_string(w.n) + " at " +
                   w.points[0].to_string() + " < " + w.points[1].to_string() + " < " + w.points[2].to_string() +
                   " < " + w.points[3].to_string()),
        witness_(std::move(w)) {}
  const AlternationWitness& witness() const { return witness_; }

 private:
  AlternationWitness witness_;
};

/// Skips the barely-alternating validation; for inspecting hand-built families.
inline TripleTable compute_triples_unchecked(const ChainFamily& family, const LineModel& model) {
  if (family.indices() != model.dense()) throw InputError("family indices differ from the model's index set");
  TripleTable table;
  table.rows.reserve(family.ground_size());
  const IndexValue& top = model.max_point();
  for (std::size_t n = 0; n < family.ground_size(); ++n) {
    std::size_t i = 0;
    const std::size_t k = family.size();
    auto advance_to = [&](bool member) {
      while (i < k && family.set(i).contains(n) != member) ++i;
      return i < k ? family.index(i) : top;
    };
    // Each minimum starts strictly after the previous one's position, which
    // realises the "y > previous point" constraint on the finite order.
    IndexValue entry = advance_to(true);
    IndexValue exit = i < k ? (++i, advance_to(false)) : top;
    IndexValue reentry = i < k ? (++i, advance_to(true)) : top;
    table.rows.push_back({std::move(entry), std::move(exit), std::move(reentry)});
  }
  return table;
}

inline TripleTable compute_triples(const ChainFamily& family, const LineModel& model) {
  auto verdict = is_barely_alternating(family);
  if (!verdict) throw NotBarelyAlternatingError(verdict.witness());
  return compute_triples_unchecked(family, model);
}

// ---------------------------------------------------------------------------

/// A function on the carrier; total on K.
class FunctionOnLine {
 public:
  FunctionOnLine(const LineModel& model, std::map<IndexValue, Rational> values) : values_(std::move(values)) {
    if (values_.size() != model.carrier().size()) {
      throw InputError("function must assign exactly one value to each of the " +
                       std::to_string(model.carrier().size()) + " carrier points");
    }
    for (const auto& x : model.carrier()) {
      if (!values_.count(x)) throw InputError("function undefined at carrier point " + x.to_string());
    }
  }

  static FunctionOnLine constant(const LineModel& model, const Rational& c) {
    std::map<IndexValue, Rational> v;
    for (const auto& x : model.carrier()) v.emplace(x, c);
    return FunctionOnLine(model, std::move(v));
  }

  const Rational& operator()(const IndexValue& x) const {
    auto it = values_.find(x);
    if (it == values_.end()) throw InputError("function undefined at " + x.to_string());
    return it->second;
  }

  const std::map<IndexValue, Rational>& values() const { return values_; }

  Rational sup_norm() const {
    Rational s = 0;
    for (const auto& [x, v] : values_) s = std::max(s, Rational(abs(v)));
    return s;
  }

  /// alpha * f + beta * g over the same carrier.
  static FunctionOnLine combine(const Rational& alpha, const FunctionOnLine& f, const Rational& beta,
                                const FunctionOnLine& g) {
    if (f.values_.size() != g.values_.size()) throw InputError("functions over different carriers");
    FunctionOnLine out = f;
    for (auto& [x, v] : out.values_) v = alpha * v + beta * g(x);
    return out;
  }

  friend bool operator==(const FunctionOnLine&, const FunctionOnLine&) = default;

 private:
  std::map<IndexValue, Rational> values_;
};

struct ExtendedFunction {
  FunctionOnLine on_carrier;        // Ef restricted to K, equal to f
  std::vector<Rational> on_ground;  // Ef(n)

  Rational sup_norm() const {
    Rational s = on_carrier.sup_norm();
    for (const auto& v : on_ground) s = std::max(s, Rational(abs(v)));
    return s;
  }
};

inline Rational signed_sum(const FunctionOnLine& f, const Triple& t) {
  return f(t.entry) - f(t.exit) + f(t.reentry);
}

inline ExtendedFunction apply_operator(const FunctionOnLine& f, const TripleTable& triples) {
  ExtendedFunction out{f, {}};
  out.on_ground.reserve(triples.rows.size());
  for (const auto& t : triples.rows) out.on_ground.push_back(signed_sum(f, t));
  return out;
}

/// Exact norm of E on the finite model: 3 if some triple has three distinct
/// points, otherwise 1 (a coincidence collapses the signed sum to one value).
inline Rational operator_norm(const TripleTable& triples) {
  for (const auto& t : triples.rows) {
    if (t.pattern() == TriplePattern::strict) return 3;
  }
  return 1;
}

struct NormWitness {
  std::size_t n;
  FunctionOnLine f;  // +1 at entry and reentry, -1 at exit, 0 elsewhere
};

/// A sup-norm 1 function attaining |Ef(n)| = 3, when some triple is strict.
inline std::optional<NormWitness> norm_witness(const TripleTable& triples, const LineModel& model) {
  for (std::size_t n = 0; n < triples.rows.size(); ++n) {
    const Triple& t = triples.rows[n];
    if (t.pattern() != TriplePattern::strict) continue;
    std::map<IndexValue, Rational> v;
    for (const auto& x : model.carrier()) v.emplace(x, 0);
    v.at(t.entry) = 1;
    v.at(t.exit) = -1;
    v.at(t.reentry) = 1;
    return NormWitness{n, FunctionOnLine(model, std::move(v))};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

/// n leaves B_y for some y beyond its reentry point.
struct LateExitWitness {
  std::size_t n;
  IndexValue y;
  friend bool operator==(const LateExitWitness&, const LateExitWitness&) = default;
};

/// ok iff n ∈ B_y for every n and every y > reentry(n).
inline Verdict<LateExitWitness> no_fourth_flip_check(const ChainFamily& family, const TripleTable& triples) {
  if (triples.rows.size() != family.ground_size()) throw InputError("triple table does not match the ground");
  for (std::size_t n = 0; n < family.ground_size(); ++n) {
    const IndexValue& reentry = triples.rows[n].reentry;
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (reentry < family.index(i) && !family.set(i).contains(n)) {
        return Verdict<LateExitWitness>::failed({n, family.index(i)});
      }
    }
  }
  return Verdict<LateExitWitness>::ok();
}

/// The point z a sequence with limit triple (entry, exit, reentry) converges
/// to: entry if entry < exit = reentry, reentry if entry = exit < reentry,
/// the common point if all coincide. Three distinct points cannot be a limit.
inline IndexValue limit_eval_point(const IndexValue& entry, const IndexValue& exit, const IndexValue& reentry) {
  if (exit < entry || reentry < exit) {
    throw InputError("limit triple not ordered: " + entry.to_string() + ", " + exit.to_string() + ", " +
                     reentry.to_string());
  }
  if (entry < exit && exit < reentry) {
    throw InconsistencyError("limit triple " + entry.to_string() + " < " + exit.to_string() + " < " +
                             reentry.to_string() + " has three distinct points");
  }
  return entry < exit ? entry : reentry;
}

inline IndexValue limit_eval_point(const Triple& t) { return limit_eval_point(t.entry, t.exit, t.reentry); }

// ---------------------------------------------------------------------------
// Continuity harness

struct ScheduleStep {
  std::size_t n;
  std::size_t stage;
};

struct HarnessRow {
  ScheduleStep step;
  Triple triple;
  Rational value;  // Ef(n)
};

struct HarnessReport {
  std::vector<HarnessRow> trajectory;
  Triple limit;
  IndexValue point;        // z
  Rational value_at_point;  // f(z)
  Rational final_value;     // Ef(n) at the last stage
  bool identity_holds = false;  // final_value == f(z)
};

namespace detail {

// non-decreasing or non-increasing
template <class Get>
bool coordinate_monotone(const std::vector<HarnessRow>& rows, Get get) {
  bool up = true;
  bool down = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (get(rows[i].triple) < get(rows[i - 1].triple)) up = false;
    if (get(rows[i - 1].triple) < get(rows[i].triple)) down = false;
  }
  return up || down;
}

}  // namespace detail

/// Follows Ef along a schedule of ground elements whose triples move
/// monotonically in each coordinate. The last triple plays the limit triple;
/// its limit point z is checked against Ef at the last stage.
inline HarnessReport continuity_harness(const ChainFamily& family, const LineModel& model,
                                        const std::vector<ScheduleStep>& schedule, const FunctionOnLine& f) {
  if (schedule.empty()) throw InputError("schedule is empty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i].n >= family.ground_size()) {
      throw InputError("schedule names ground element " + std::to_string(schedule[i].n) + " out of range");
    }
    if (i > 0 && schedule[i].stage <= schedule[i - 1].stage) {
      throw InputError("schedule stages must be strictly increasing");
    }
  }
  const TripleTable triples = compute_triples(family, model);

  HarnessReport report;
  for (const auto& step : schedule) {
    const Triple& t = triples.rows[step.n];
    report.trajectory.push_back({step, t, signed_sum(f, t)});
  }
  if (!detail::coordinate_monotone(report.trajectory, [](const Triple& t) { return t.entry; }) ||
      !detail::coordinate_monotone(report.trajectory, [](const Triple& t) { return t.exit; }) ||
      !detail::coordinate_monotone(report.trajectory, [](const Triple& t) { return t.reentry; })) {
    throw InputError("schedule triples are not monotone in every coordinate");
  }

  report.limit = report.trajectory.back().triple;
  report.point = limit_eval_point(report.limit);
  report.value_at_point = f(report.point);
  report.final_value = report.trajectory.back().value;
  report.identity_holds = report.final_value == report.value_at_point;
  return report;
}

/// A schedule ending at `target`: the ground elements whose triples lie
/// coordinatewise below target's, ordered lexicographically by triple and
/// thinned to a coordinatewise non-decreasing sequence.
inline std::vector<ScheduleStep> schedule_towards(const TripleTable& triples, std::size_t target) {
  if (target >= triples.rows.size()) throw InputError("schedule target out of range");
  const Triple& goal = triples.rows[target];
  auto below = [](const Triple& a, const Triple& b) {
    return !(b.entry < a.entry) && !(b.exit < a.exit) && !(b.reentry < a.reentry);
  };
  std::vector<std::size_t> candidates;
  for (std::size_t n = 0; n < triples.rows.size(); ++n) {
    if (n != target && below(triples.rows[n], goal)) candidates.push_back(n);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    const Triple& ta = triples.rows[a];
    const Triple& tb = triples.rows[b];
    if (ta.entry != tb.entry) return ta.entry < tb.entry;
    if (ta.exit != tb.exit) return ta.exit < tb.exit;
    return ta.reentry < tb.reentry;
  });
  std::vector<ScheduleStep> schedule;
  const Triple* last = nullptr;
  for (std::size_t n : candidates) {
    if (last == nullptr || below(*last, triples.rows[n])) {
      schedule.push_back({n, schedule.size()});
      last = &triples.rows[n];
    }
  }
  schedule.push_back({target, schedule.size()});
  return schedule;
}

}  // namespace barely
