#pragma once

// Example families: initial-segment chains, the dyadic construction that
// removes from {q < x} the truncation points S_x, seeded perturbations, and
// families read off a sign matrix.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "barely/chain_core.hpp"
#include "barely/errors.hpp"
#include "barely/index_value.hpp"
#include "barely/rng.hpp"
#include "barely/set_bits.hpp"

namespace barely {

/// Enumerates the dyadics k/2^d in (0,1) increasingly: element n is (n+1)/2^d,
/// so N = 2^d - 1.
class DyadicGround {
 public:
  static constexpr unsigned kMaxDepth = 24;

  explicit DyadicGround(unsigned depth) : depth_(depth) {
    if (depth == 0 || depth > kMaxDepth) {
      throw InputError("dyadic depth must be in [1, " + std::to_string(kMaxDepth) + "], got " +
                       std::to_string(depth));
    }
  }

  unsigned depth() const { return depth_; }
  std::size_t size() const { return (std::size_t{1} << depth_) - 1; }
  GroundSet ground() const { return GroundSet(size()); }

  IndexValue point(std::size_t n) const {
    if (n >= size()) throw InputError("dyadic ground element out of range");
    return IndexValue(Rational(BigInt(n + 1), BigInt(1) << depth_));
  }

  /// Ground element whose value is q, if any.
  std::optional<std::size_t> element_of(const Rational& q) const {
    Rational scaled = q * Rational(BigInt(1) << depth_);
    if (boost::multiprecision::denominator(scaled) != 1) return std::nullopt;
    BigInt k = boost::multiprecision::numerator(scaled);
    if (k < 1 || k > BigInt(size())) return std::nullopt;
    return static_cast<std::size_t>(k) - 1;
  }

 private:
  unsigned depth_;
};

/// A finite binary word x_1 ... x_L standing for x = 0.x_1 x_2 ...
class BitIndex {
 public:
  explicit BitIndex(std::vector<bool> bits) : bits_(std::move(bits)) {}

  static BitIndex parse(std::string_view word) {
    std::vector<bool> bits;
    bits.reserve(word.size());
    for (char c : word) {
      if (c != '0' && c != '1') throw InputError("bit word may contain only 0 and 1: '" + std::string(word) + "'");
      bits.push_back(c == '1');
    }
    return BitIndex(std::move(bits));
  }

  std::size_t length() const { return bits_.size(); }
  /// x_i, 1-based as in the binary expansion.
  bool bit(std::size_t i) const { return bits_.at(i - 1); }

  /// Value of the prefix 0.x_1 ... x_k.
  Rational prefix_value(std::size_t k) const {
    BigInt acc = 0;
    for (std::size_t i = 0; i < k; ++i) acc = acc * 2 + (bits_.at(i) ? 1 : 0);
    return Rational(acc, BigInt(1) << k);
  }

  IndexValue value() const { return IndexValue(prefix_value(bits_.size())); }

  std::string to_string() const {
    std::string s;
    for (bool b : bits_) s += b ? '1' : '0';
    return s;
  }

 private:
  std::vector<bool> bits_;
};

/// Uniform random word of length depth + extra_bits whose last bit is 1, so
/// its value is not a dyadic of depth <= depth.
inline BitIndex random_bit_index(DeterministicRng& rng, unsigned depth, unsigned extra_bits = 8) {
  std::vector<bool> bits(depth + std::max(extra_bits, 1u));
  for (std::size_t i = 0; i + 1 < bits.size(); ++i) bits[i] = rng.coin();
  bits.back() = true;
  return BitIndex(std::move(bits));
}

// ---------------------------------------------------------------------------

inline std::vector<IndexValue> uniform_points(std::size_t ground_size) {
  std::vector<IndexValue> p;
  p.reserve(ground_size);
  for (std::size_t n = 0; n < ground_size; ++n) {
    p.emplace_back(Rational(BigInt(2 * n + 1), BigInt(2 * ground_size)));
  }
  return p;
}

/// `count` distinct random indices in (0,1) with denominator dividing 2^20,
/// none equal to a point of `avoid`.
inline std::vector<IndexValue> random_indices(DeterministicRng& rng, std::size_t count,
                                              const std::vector<IndexValue>& avoid = {}) {
  constexpr std::uint64_t kDen = std::uint64_t{1} << 20;
  if (count >= kDen - 1 - avoid.size()) throw InputError("too many random indices requested");
  std::set<IndexValue> taken(avoid.begin(), avoid.end());
  std::vector<IndexValue> out;
  out.reserve(count);
  while (out.size() < count) {
    IndexValue x(Rational(BigInt(1 + rng.below(kDen - 1)), BigInt(kDen)));
    if (taken.insert(x).second) out.push_back(std::move(x));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// A_x = {n : p_n < x}. One position per ground element.
inline ChainFamily initial_segment_chain(const std::vector<IndexValue>& points,
                                         const std::vector<IndexValue>& xs) {
  if (points.empty()) throw InputError("initial segment chain needs at least one point");
  std::vector<IndexValue> sorted_points = points;
  std::sort(sorted_points.begin(), sorted_points.end());
  std::vector<FamilyEntry> entries;
  entries.reserve(xs.size());
  for (const auto& x : xs) {
    if (std::binary_search(sorted_points.begin(), sorted_points.end(), x)) {
      throw InputError("index " + x.to_string() + " coincides with a ground point");
    }
    SetBits s(points.size());
    for (std::size_t n = 0; n < points.size(); ++n) {
      if (points[n] < x) s.insert(n);
    }
    entries.push_back({x, std::move(s)});
  }
  return ChainFamily(GroundSet(points.size()), std::move(entries));
}

/// S_x ∩ ground: the values 0.x_1...x_n (followed by 0) for n < d with
/// x_{n+1} = 1. The value 0 lies outside the open-interval ground and is dropped.
inline SetBits truncation_points(const BitIndex& x, const DyadicGround& ground) {
  SetBits s(ground.size());
  for (std::size_t n = 0; n < ground.depth() && n < x.length(); ++n) {
    if (!x.bit(n + 1)) continue;
    if (auto e = ground.element_of(x.prefix_value(n))) s.insert(*e);
  }
  return s;
}

/// A'_x = {q in ground : q < x, q not in S_x}.
inline ChainFamily marciszewski_family(const std::vector<BitIndex>& xs, const DyadicGround& ground) {
  std::vector<FamilyEntry> entries;
  entries.reserve(xs.size());
  for (const auto& x : xs) {
    if (x.length() < ground.depth()) {
      throw InputError("bit word '" + x.to_string() + "' shorter than depth " + std::to_string(ground.depth()));
    }
    const IndexValue v = x.value();
    if (v.value() == 0) throw InputError("bit word '" + x.to_string() + "' has value 0, outside (0,1)");
    if (ground.element_of(v.value())) {
      throw InputError("bit word '" + x.to_string() + "' equals the ground dyadic " + v.to_string());
    }
    // (n+1)/2^d < v  iff  n+1 <= floor(v * 2^d), since v * 2^d is not an integer
    const Rational scaled = v.value() * Rational(BigInt(1) << ground.depth());
    const auto below_count = static_cast<std::size_t>(boost::multiprecision::numerator(scaled) /
                                                      boost::multiprecision::denominator(scaled));
    SetBits below(ground.size());
    for (std::size_t n = 0; n < below_count; ++n) below.insert(n);
    entries.push_back({v, below - truncation_points(x, ground)});
  }
  return ChainFamily(ground.ground(), std::move(entries));
}

inline std::vector<BitIndex> random_bit_indices(DeterministicRng& rng, unsigned depth, std::size_t count,
                                                unsigned extra_bits = 8) {
  std::set<IndexValue> seen;
  std::vector<BitIndex> out;
  out.reserve(count);
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 64 * (count + 1)) throw InputError("could not draw enough distinct bit words");
    BitIndex b = random_bit_index(rng, depth, extra_bits);
    if (seen.insert(b.value()).second) out.push_back(std::move(b));
  }
  return out;
}

/// Initial-segment chain over evenly spaced positions (2n+1)/(2N), then
/// exactly `flips_per_set` distinct bits toggled in every set, drawn from a
/// generator seeded by `seed`.
inline ChainFamily perturbed_chain(std::uint64_t seed, std::size_t ground_size,
                                   const std::vector<IndexValue>& xs, std::size_t flips_per_set) {
  if (flips_per_set > ground_size) {
    throw InputError("cannot toggle " + std::to_string(flips_per_set) + " distinct bits in a ground of size " +
                     std::to_string(ground_size));
  }
  ChainFamily base = initial_segment_chain(uniform_points(ground_size), xs);
  DeterministicRng rng(seed);
  auto entries = base.entries();
  for (auto& e : entries) {
    for (std::size_t n : rng.sample(ground_size, flips_per_set)) e.set.toggle(n);
  }
  return ChainFamily(base.ground(), std::move(entries));
}

/// A_y = {n : h(y, n) < 0}. Rows follow ys, which must be strictly increasing.
inline ChainFamily from_sign_matrix(const std::vector<IndexValue>& ys,
                                    const std::vector<std::vector<Rational>>& matrix) {
  if (ys.size() != matrix.size()) {
    throw InputError("sign matrix has " + std::to_string(matrix.size()) + " rows for " +
                     std::to_string(ys.size()) + " indices");
  }
  if (matrix.empty()) throw InputError("sign matrix is empty; ground size unknown");
  const std::size_t n_cols = matrix.front().size();
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (matrix[i].size() != n_cols) throw InputError("sign matrix rows differ in length");
    if (i > 0 && !(ys[i - 1] < ys[i])) throw InputError("sign matrix indices must be strictly increasing");
  }
  GroundSet ground(n_cols);
  std::vector<FamilyEntry> entries;
  entries.reserve(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) {
    SetBits s(ground);
    for (std::size_t n = 0; n < n_cols; ++n) {
      if (matrix[i][n] < 0) s.insert(n);
    }
    entries.push_back({ys[i], std::move(s)});
  }
  return ChainFamily(ground, std::move(entries));
}

}  // namespace barely
