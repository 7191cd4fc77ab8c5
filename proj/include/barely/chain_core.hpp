#pragma once

// Finite-scale almost chains: a family {A_x : x in X} of subsets of a
// truncated ground set {0, ..., N-1}, indexed by a finite set X of exact
// rationals. Nothing about inclusion is assumed by the type; the checkers
// below decide the chain and barely-alternating properties and compute the
// defect sets A_x \ A_y that stand in for "finite" exceptions.

#include <algorithm>
#include <array>
#include <cstddef>
#include <iterator>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "barely/errors.hpp"
#include "barely/index_value.hpp"
#include "barely/set_bits.hpp"

namespace barely {

struct FamilyEntry {
  IndexValue index;
  SetBits set;
};

class ChainFamily {
 public:
  explicit ChainFamily(GroundSet ground) : ground_(ground) {}

  /// Entries may arrive in any order; they are sorted by index. Duplicate
  /// indices and sets over a different ground are rejected.
  ChainFamily(GroundSet ground, std::vector<FamilyEntry> entries) : ground_(ground) {
    std::sort(entries.begin(), entries.end(),
              [](const FamilyEntry& a, const FamilyEntry& b) { return a.index < b.index; });
    indices_.reserve(entries.size());
    sets_.reserve(entries.size());
    for (auto& e : entries) {
      if (!indices_.empty() && indices_.back() == e.index) {
        throw InputError("duplicate index " + e.index.to_string());
      }
      if (e.set.ground_size() != ground_.size()) {
        throw InputError("set at index " + e.index.to_string() + " has ground size " +
                         std::to_string(e.set.ground_size()) + ", expected " +
                         std::to_string(ground_.size()));
      }
      indices_.push_back(std::move(e.index));
      sets_.push_back(std::move(e.set));
    }
  }

  GroundSet ground() const { return ground_; }
  std::size_t ground_size() const { return ground_.size(); }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }

  const std::vector<IndexValue>& indices() const { return indices_; }
  const std::vector<SetBits>& sets() const { return sets_; }
  const IndexValue& index(std::size_t i) const { return indices_.at(i); }
  const SetBits& set(std::size_t i) const { return sets_.at(i); }

  std::optional<std::size_t> position(const IndexValue& x) const {
    auto it = std::lower_bound(indices_.begin(), indices_.end(), x);
    if (it == indices_.end() || *it != x) return std::nullopt;
    return static_cast<std::size_t>(it - indices_.begin());
  }
  bool contains(const IndexValue& x) const { return position(x).has_value(); }

  const SetBits& set_at(const IndexValue& x) const {
    auto p = position(x);
    if (!p) throw InputError("index " + x.to_string() + " not in family");
    return sets_[*p];
  }

  std::vector<FamilyEntry> entries() const {
    std::vector<FamilyEntry> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back({indices_[i], sets_[i]});
    return out;
  }

  /// Adds one entry in place.
  void insert(IndexValue x, SetBits s) {
    if (s.ground_size() != ground_.size()) {
      throw InputError("set at index " + x.to_string() + " has ground size " + std::to_string(s.ground_size()) +
                       ", expected " + std::to_string(ground_.size()));
    }
    auto it = std::lower_bound(indices_.begin(), indices_.end(), x);
    if (it != indices_.end() && *it == x) throw InputError("duplicate index " + x.to_string());
    const auto pos = it - indices_.begin();
    indices_.insert(it, std::move(x));
    sets_.insert(sets_.begin() + pos, std::move(s));
  }

  /// Copy of this family with one more entry.
  ChainFamily with_entry(IndexValue x, SetBits s) const {
    ChainFamily copy = *this;
    copy.insert(std::move(x), std::move(s));
    return copy;
  }

  /// Deletes the elements of `removed` from every set.
  ChainFamily without_elements(const SetBits& removed) const {
    auto e = entries();
    for (auto& entry : e) entry.set -= removed;
    return ChainFamily(ground_, std::move(e));
  }

  friend bool operator==(const ChainFamily&, const ChainFamily&) = default;

 private:
  GroundSet ground_;
  std::vector<IndexValue> indices_;
  std::vector<SetBits> sets_;
};

/// A finite partial family (F, {B_x : x in F}); F is the family's index list.
class Condition {
 public:
  explicit Condition(ChainFamily family) : family_(std::move(family)) {}
  static Condition empty(GroundSet ground) { return Condition(ChainFamily(ground)); }

  const ChainFamily& family() const { return family_; }
  GroundSet ground() const { return family_.ground(); }

  friend bool operator==(const Condition&, const Condition&) = default;

 private:
  ChainFamily family_;
};

/// Either ok, or the least counterexample.
template <class Witness>
class Verdict {
 public:
  static Verdict ok() { return Verdict(); }
  static Verdict failed(Witness w) {
    Verdict v;
    v.witness_ = std::move(w);
    return v;
  }
  bool is_ok() const { return !witness_.has_value(); }
  explicit operator bool() const { return is_ok(); }
  const Witness& witness() const { return witness_.value(); }
  const std::optional<Witness>& maybe_witness() const { return witness_; }

 private:
  std::optional<Witness> witness_;
};

/// n in A_{x1}, n not in A_{x2}, n in A_{x3}, n not in A_{x4}, x1 < x2 < x3 < x4.
struct AlternationWitness {
  std::size_t n;
  std::array<IndexValue, 4> points;
  friend bool operator==(const AlternationWitness&, const AlternationWitness&) = default;
};

/// n in A_lower \ A_upper with lower < upper.
struct InclusionWitness {
  std::size_t n;
  IndexValue lower;
  IndexValue upper;
  friend bool operator==(const InclusionWitness&, const InclusionWitness&) = default;
};

using AlternationVerdict = Verdict<AlternationWitness>;
using InclusionVerdict = Verdict<InclusionWitness>;

namespace detail {

inline void check_ground_element(const ChainFamily& family, std::size_t n) {
  if (!family.ground().contains(n)) {
    throw InputError("ground element " + std::to_string(n) + " outside {0.." +
                     std::to_string(family.ground_size() - 1) + "}");
  }
}

// Greedy leftmost match of the alternating pattern 1,0,1,0,... of the given
// length along the trace of n. Greedy matching yields the lexicographically
// least position tuple whenever any match exists.
template <std::size_t Length>
std::optional<std::array<std::size_t, Length>> leftmost_alternation(const ChainFamily& family,
                                                                    std::size_t n) {
  std::array<std::size_t, Length> pos{};
  std::size_t state = 0;
  for (std::size_t i = 0; i < family.size() && state < Length; ++i) {
    const bool want_member = (state % 2 == 0);
    if (family.set(i).contains(n) == want_member) pos[state++] = i;
  }
  if (state < Length) return std::nullopt;
  return pos;
}

}  // namespace detail

/// Bit i is '1' iff n is in the i-th set (sets in increasing index order).
inline std::string membership_trace(const ChainFamily& family, std::size_t n) {
  detail::check_ground_element(family, n);
  std::string trace(family.size(), '0');
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (family.set(i).contains(n)) trace[i] = '1';
  }
  return trace;
}

/// Number of adjacent positions where the membership of n changes.
inline std::size_t flip_count(const ChainFamily& family, std::size_t n) {
  detail::check_ground_element(family, n);
  std::size_t flips = 0;
  for (std::size_t i = 1; i < family.size(); ++i) {
    if (family.set(i - 1).contains(n) != family.set(i).contains(n)) ++flips;
  }
  return flips;
}

/// ok iff no trace contains 1,0,1,0 as a subsequence, i.e.
/// A_{x1} ∩ A_{x3} ⊆ A_{x2} ∪ A_{x4} whenever x1 < x2 < x3 < x4.
inline AlternationVerdict is_barely_alternating(const ChainFamily& family) {
  if (family.size() < 4) return AlternationVerdict::ok();
  for (std::size_t n = 0; n < family.ground_size(); ++n) {
    if (auto pos = detail::leftmost_alternation<4>(family, n)) {
      return AlternationVerdict::failed(
          {n,
           {family.index((*pos)[0]), family.index((*pos)[1]), family.index((*pos)[2]),
            family.index((*pos)[3])}});
    }
  }
  return AlternationVerdict::ok();
}

/// ok iff A_x ⊆ A_y for all x < y.
inline InclusionVerdict is_chain(const ChainFamily& family) {
  if (family.size() < 2) return InclusionVerdict::ok();
  for (std::size_t n = 0; n < family.ground_size(); ++n) {
    if (auto pos = detail::leftmost_alternation<2>(family, n)) {
      return InclusionVerdict::failed({n, family.index((*pos)[0]), family.index((*pos)[1])});
    }
  }
  return InclusionVerdict::ok();
}

/// A_x \ A_y for x < y.
inline SetBits defect(const ChainFamily& family, const IndexValue& x, const IndexValue& y) {
  if (!(x < y)) throw InputError("defect needs x < y, got " + x.to_string() + ", " + y.to_string());
  return family.set_at(x) - family.set_at(y);
}

struct PairDefect {
  IndexValue lower;
  IndexValue upper;
  SetBits defect;
  bool over_budget;
};

/// All pairwise defects A_x \ A_y (x < y), in lexicographic pair order.
struct DefectReport {
  std::vector<PairDefect> pair_defects;
  std::size_t max_defect_size = 0;
  std::size_t budget = 0;

  bool within_budget() const { return max_defect_size <= budget; }
  std::size_t flagged_count() const {
    return static_cast<std::size_t>(std::count_if(pair_defects.begin(), pair_defects.end(),
                                                  [](const PairDefect& p) { return p.over_budget; }));
  }
  std::vector<PairDefect> flagged() const {
    std::vector<PairDefect> out;
    std::copy_if(pair_defects.begin(), pair_defects.end(), std::back_inserter(out),
                 [](const PairDefect& p) { return p.over_budget; });
    return out;
  }
};

/// Finite surrogate for A_x ⊆* A_y: every defect must have at most `budget`
/// elements. Over-budget pairs are flagged, not thrown.
inline DefectReport validate_almost_chain(const ChainFamily& family, std::size_t budget) {
  DefectReport report;
  report.budget = budget;
  const std::size_t k = family.size();
  if (k >= 2) report.pair_defects.reserve(k * (k - 1) / 2);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      SetBits d = family.set(i) - family.set(j);
      const std::size_t size = d.count();
      report.max_defect_size = std::max(report.max_defect_size, size);
      report.pair_defects.push_back({family.index(i), family.index(j), std::move(d), size > budget});
    }
  }
  return report;
}

/// D = union of A_x \ A_y over x < y: the least set whose removal from every
/// member leaves a chain.
inline SetBits chain_defect_set(const ChainFamily& family) {
  SetBits seen(family.ground_size());
  SetBits result(family.ground_size());
  for (const auto& s : family.sets()) {
    result |= (seen - s);
    seen |= s;
  }
  return result;
}

}  // namespace barely
