#pragma once

// Constructive core: one-point insertion, whole-family adjustment into a
// barely alternating family, compatibility of partial families, sunflower
// extraction over finite index sets, and interpolation between an ascending
// and a descending tower.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "barely/chain_core.hpp"
#include "barely/errors.hpp"
#include "barely/index_value.hpp"
#include "barely/rng.hpp"
#include "barely/set_bits.hpp"

namespace barely {

// ---------------------------------------------------------------------------
// One-point insertion

struct InsertionReceipt {
  IndexValue inserted_index;
  SetBits produced_set;
  std::optional<IndexValue> predecessor;
  std::optional<IndexValue> successor;
  /// produced_set Δ input set.
  SetBits delta_from_input;

  std::size_t cost() const { return delta_from_input.count(); }
};

namespace detail {

inline InsertionReceipt insertion_receipt(const ChainFamily& family, const IndexValue& x,
                                          const SetBits& input_set) {
  if (input_set.ground_size() != family.ground_size()) {
    throw InputError("ground mismatch inserting " + x.to_string() + ": set over " +
                     std::to_string(input_set.ground_size()) + ", condition over " +
                     std::to_string(family.ground_size()));
  }
  const auto& idx = family.indices();
  const auto pos = static_cast<std::size_t>(std::lower_bound(idx.begin(), idx.end(), x) - idx.begin());
  if (pos < idx.size() && idx[pos] == x) throw InputError("index " + x.to_string() + " already in condition");

  InsertionReceipt receipt{x, SetBits(family.ground_size()), std::nullopt, std::nullopt,
                           SetBits(family.ground_size())};
  SetBits below(family.ground_size());
  SetBits above = SetBits::full(family.ground_size());
  if (pos > 0) {
    below = family.set(pos - 1);
    receipt.predecessor = family.index(pos - 1);
  }
  if (pos < family.size()) {
    above = family.set(pos);
    receipt.successor = family.index(pos);
  }

  receipt.produced_set = (input_set | below) - (input_set - above);
  receipt.delta_from_input = receipt.produced_set ^ input_set;
  return receipt;
}

}  // namespace detail

/// Inserts x with B_x = (A_x ∪ A) \ (A_x \ C), where A is the set of the
/// immediate predecessor of x in the condition (∅ if none) and C that of the
/// immediate successor (the full ground if none).
///
/// Every m then has the same membership in B_x as in A (when m ∉ A_x) or as
/// in C (when m ∈ A_x), so a barely alternating condition stays barely
/// alternating: the new trace bit duplicates a neighbouring one.
inline std::pair<Condition, InsertionReceipt> insert_point(const Condition& cond,
                                                           const IndexValue& x,
                                                           const SetBits& input_set) {
  InsertionReceipt receipt = detail::insertion_receipt(cond.family(), x, input_set);
  Condition extended(cond.family().with_entry(x, receipt.produced_set));
  return {std::move(extended), std::move(receipt)};
}

// ---------------------------------------------------------------------------
// Whole-family adjustment

struct AdjustmentReport {
  std::vector<InsertionReceipt> receipts;  // insertion order
  std::size_t total_cost = 0;
  std::size_t max_cost = 0;
};

/// Starting from the empty condition, inserts every index of `input` in the
/// given order with its original set. The result is barely alternating and
/// has the same index set as the input.
inline std::pair<ChainFamily, AdjustmentReport> adjust_family(const ChainFamily& input,
                                                              const std::vector<IndexValue>& order) {
  if (order.size() != input.size()) {
    throw InputError("insertion order has " + std::to_string(order.size()) + " indices, family has " +
                     std::to_string(input.size()));
  }
  std::vector<bool> used(input.size(), false);
  for (const auto& x : order) {
    auto p = input.position(x);
    if (!p) throw InputError("insertion order names unknown index " + x.to_string());
    if (used[*p]) throw InputError("insertion order repeats index " + x.to_string());
    used[*p] = true;
  }

  // Same step as insert_point, applied in place.
  ChainFamily built(input.ground());
  AdjustmentReport report;
  report.receipts.reserve(order.size());
  for (const auto& x : order) {
    InsertionReceipt receipt = detail::insertion_receipt(built, x, input.set_at(x));
    built.insert(x, receipt.produced_set);
    report.total_cost += receipt.cost();
    report.max_cost = std::max(report.max_cost, receipt.cost());
    report.receipts.push_back(std::move(receipt));
  }
  return {std::move(built), std::move(report)};
}

/// Sorted insertion order.
inline std::pair<ChainFamily, AdjustmentReport> adjust_family(const ChainFamily& input) {
  return adjust_family(input, input.indices());
}

inline std::vector<IndexValue> shuffled_order(const ChainFamily& family, std::uint64_t seed) {
  std::vector<IndexValue> order = family.indices();
  DeterministicRng rng(seed);
  rng.shuffle(order);
  return order;
}

/// Neighbour sets A, C seen by a receipt at insertion time. Insertion never
/// changes sets already present, so they can be read off the final family.
inline std::pair<SetBits, SetBits> neighbour_sets(const ChainFamily& output,
                                                  const InsertionReceipt& receipt) {
  SetBits below(output.ground_size());
  SetBits above = SetBits::full(output.ground_size());
  if (receipt.predecessor) below = output.set_at(*receipt.predecessor);
  if (receipt.successor) above = output.set_at(*receipt.successor);
  return {std::move(below), std::move(above)};
}

/// B_x Δ A_x ⊆ (A \ A_x) ∪ (A_x \ C).
inline bool within_cost_bound(const InsertionReceipt& receipt, const SetBits& input_set,
                              const SetBits& below, const SetBits& above) {
  return receipt.delta_from_input.is_subset_of((below - input_set) | (input_set - above));
}

// ---------------------------------------------------------------------------
// Compatibility

/// Two conditions are compatible iff the union of their families is barely
/// alternating. Shared indices must carry identical sets.
inline AlternationVerdict conditions_compatible(const Condition& first, const Condition& second) {
  const ChainFamily& a = first.family();
  const ChainFamily& b = second.family();
  if (a.ground() != b.ground()) {
    throw InputError("conditions over different grounds (" + std::to_string(a.ground_size()) + " vs " +
                     std::to_string(b.ground_size()) + ")");
  }
  std::vector<FamilyEntry> merged = a.entries();
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (auto p = a.position(b.index(i))) {
      if (a.set(*p) != b.set(i)) {
        throw InputError("conditions disagree at shared index " + b.index(i).to_string());
      }
      continue;
    }
    merged.push_back({b.index(i), b.set(i)});
  }
  return is_barely_alternating(ChainFamily(a.ground(), std::move(merged)));
}

// ---------------------------------------------------------------------------
// Sunflower (Δ-system) extraction

using IndexList = std::vector<IndexValue>;

struct SunflowerDecomposition {
  IndexList root;
  std::vector<IndexList> petals;     // parallel to members
  std::vector<std::size_t> members;  // positions in the input list, increasing
};

namespace detail {

inline IndexList intersect(const IndexList& a, const IndexList& b) {
  IndexList out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IndexList subtract(const IndexList& a, const IndexList& b) {
  IndexList out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool disjoint(const IndexList& a, const IndexList& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return false;
    }
  }
  return true;
}

// Exact search for `need` pairwise disjoint petals among candidates[from..].
inline bool find_disjoint_petals(const std::vector<IndexList>& petals, std::size_t from, std::size_t need,
                                 std::vector<std::size_t>& chosen) {
  if (need == 0) return true;
  for (std::size_t i = from; i + need <= petals.size(); ++i) {
    bool ok = std::all_of(chosen.begin(), chosen.end(),
                          [&](std::size_t c) { return disjoint(petals[c], petals[i]); });
    if (!ok) continue;
    chosen.push_back(i);
    if (find_disjoint_petals(petals, i + 1, need - 1, chosen)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace detail

/// Checks the root/petal laws against the input lists.
inline bool is_valid_sunflower(const SunflowerDecomposition& d, const std::vector<IndexList>& index_sets) {
  if (d.petals.size() != d.members.size()) return false;
  if (!std::is_sorted(d.members.begin(), d.members.end())) return false;
  for (std::size_t i = 0; i < d.members.size(); ++i) {
    if (d.members[i] >= index_sets.size()) return false;
    if (i > 0 && d.members[i] == d.members[i - 1]) return false;
    const IndexList& petal = d.petals[i];
    if (petal.size() != d.petals.front().size()) return false;
    if (!detail::disjoint(petal, d.root)) return false;
    IndexList whole;
    std::set_union(d.root.begin(), d.root.end(), petal.begin(), petal.end(), std::back_inserter(whole));
    if (whole != index_sets[d.members[i]]) return false;
    for (std::size_t j = 0; j < i; ++j) {
      if (!detail::disjoint(petal, d.petals[j])) return false;
    }
  }
  return true;
}

/// Finds at least `target_count` input sets forming a sunflower: all of one
/// size, pairwise intersections equal to a common root. Sizes are tried in
/// increasing order; within a size, candidate roots are the pairwise
/// intersections, most frequent first. For each root a greedy pass is tried
/// before an exhaustive search, so a sunflower is found whenever one exists.
inline SunflowerDecomposition delta_system_extract(const std::vector<IndexList>& index_sets,
                                                   std::size_t target_count) {
  if (target_count < 2) throw InputError("target_count must be at least 2");
  for (std::size_t i = 0; i < index_sets.size(); ++i) {
    const auto& s = index_sets[i];
    if (std::adjacent_find(s.begin(), s.end(), [](const auto& a, const auto& b) { return !(a < b); }) !=
        s.end()) {
      throw InputError("index set " + std::to_string(i) + " is not strictly increasing");
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> by_size;
  for (std::size_t i = 0; i < index_sets.size(); ++i) by_size[index_sets[i].size()].push_back(i);

  for (const auto& [size, group] : by_size) {
    if (group.size() < target_count) continue;

    std::map<IndexList, std::size_t> frequency;
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        ++frequency[detail::intersect(index_sets[group[a]], index_sets[group[b]])];
      }
    }
    std::vector<std::pair<IndexList, std::size_t>> roots(frequency.begin(), frequency.end());
    std::stable_sort(roots.begin(), roots.end(),
                     [](const auto& l, const auto& r) { return l.second > r.second; });

    for (const auto& [root, freq] : roots) {
      std::vector<std::size_t> eligible;
      std::vector<IndexList> petals;
      for (std::size_t m : group) {
        if (std::includes(index_sets[m].begin(), index_sets[m].end(), root.begin(), root.end())) {
          eligible.push_back(m);
          petals.push_back(detail::subtract(index_sets[m], root));
        }
      }
      if (eligible.size() < target_count) continue;

      std::vector<std::size_t> chosen;
      for (std::size_t i = 0; i < petals.size(); ++i) {
        bool ok = std::all_of(chosen.begin(), chosen.end(),
                              [&](std::size_t c) { return detail::disjoint(petals[c], petals[i]); });
        if (ok) chosen.push_back(i);
      }
      if (chosen.size() < target_count) {
        chosen.clear();
        if (!detail::find_disjoint_petals(petals, 0, target_count, chosen)) continue;
        // extend the exact solution greedily
        for (std::size_t i = 0; i < petals.size(); ++i) {
          if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
          bool ok = std::all_of(chosen.begin(), chosen.end(),
                                [&](std::size_t c) { return detail::disjoint(petals[c], petals[i]); });
          if (ok) chosen.push_back(i);
        }
        std::sort(chosen.begin(), chosen.end());
      }

      SunflowerDecomposition result;
      result.root = root;
      for (std::size_t c : chosen) {
        result.members.push_back(eligible[c]);
        result.petals.push_back(petals[c]);
      }
      if (!is_valid_sunflower(result, index_sets)) {
        throw InconsistencyError("sunflower search produced an invalid decomposition");
      }
      return result;
    }
  }
  throw NotFoundError("no sunflower with " + std::to_string(target_count) + " members among " +
                      std::to_string(index_sets.size()) + " sets");
}

// ---------------------------------------------------------------------------
// Gap interpolation

class GapPreconditionError : public InputError {
 public:
  GapPreconditionError(std::size_t lower, std::size_t upper, std::size_t size, std::size_t budget)
      : InputError("lower[" + std::to_string(lower) + "] \\ upper[" + std::to_string(upper) + "] has " +
                   std::to_string(size) + " elements, budget " + std::to_string(budget)),
        lower_(lower),
        upper_(upper) {}
  std::size_t lower() const { return lower_; }
  std::size_t upper() const { return upper_; }

 private:
  std::size_t lower_;
  std::size_t upper_;
};

struct GapInterpolation {
  SetBits interpolant;
  std::vector<SetBits> lower_exceptions;  // U_n \ W
  std::vector<SetBits> lower_allowance;   // ⋃_{m<=n} (U_n \ V_m)
  std::vector<SetBits> upper_exceptions;  // W \ V_m
  std::vector<SetBits> upper_allowance;   // ⋃_{n<m} (U_n \ V_m)

  bool exceptions_within_allowance() const {
    for (std::size_t n = 0; n < lower_exceptions.size(); ++n) {
      if (!lower_exceptions[n].is_subset_of(lower_allowance[n])) return false;
    }
    for (std::size_t m = 0; m < upper_exceptions.size(); ++m) {
      if (!upper_exceptions[m].is_subset_of(upper_allowance[m])) return false;
    }
    return true;
  }
};

/// W = ⋃_n (U_n \ ⋃_{m<=n} (U_n \ V_m)). Every U_n \ W and W \ V_m is then
/// covered by an explicit union of pairwise defects.
inline GapInterpolation interpolate_gap(const std::vector<SetBits>& lower, const std::vector<SetBits>& upper,
                                        std::size_t defect_budget) {
  if (lower.empty() && upper.empty()) throw InputError("gap needs at least one set");
  const std::size_t ground = lower.empty() ? upper.front().ground_size() : lower.front().ground_size();
  for (const auto* tower : {&lower, &upper}) {
    for (const auto& s : *tower) {
      if (s.ground_size() != ground) throw InputError("gap towers over different grounds");
    }
  }
  for (std::size_t n = 0; n < lower.size(); ++n) {
    for (std::size_t m = 0; m < upper.size(); ++m) {
      const std::size_t size = (lower[n] - upper[m]).count();
      if (size > defect_budget) throw GapPreconditionError(n, m, size, defect_budget);
    }
  }

  GapInterpolation out{SetBits(ground), {}, {}, {}, {}};
  for (std::size_t n = 0; n < lower.size(); ++n) {
    SetBits allowance(ground);
    for (std::size_t m = 0; m <= n && m < upper.size(); ++m) allowance |= lower[n] - upper[m];
    out.interpolant |= lower[n] - allowance;
    out.lower_allowance.push_back(std::move(allowance));
  }
  for (std::size_t n = 0; n < lower.size(); ++n) out.lower_exceptions.push_back(lower[n] - out.interpolant);
  for (std::size_t m = 0; m < upper.size(); ++m) {
    SetBits allowance(ground);
    for (std::size_t n = 0; n < m && n < lower.size(); ++n) allowance |= lower[n] - upper[m];
    out.upper_exceptions.push_back(out.interpolant - upper[m]);
    out.upper_allowance.push_back(std::move(allowance));
  }
  return out;
}

}  // namespace barely
