#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "barely/errors.hpp"

namespace barely {

/// The truncation {0, ..., N-1} of omega.
class GroundSet {
 public:
  explicit GroundSet(std::size_t size) : size_(size) {
    if (size == 0) throw InputError("ground set must have at least one element");
  }
  std::size_t size() const { return size_; }
  bool contains(std::size_t n) const { return n < size_; }
  friend bool operator==(GroundSet, GroundSet) = default;

 private:
  std::size_t size_;
};

/// A subset of a ground set {0, ..., N-1}, stored as a bit vector of length N.
class SetBits {
 public:
  using Block = std::uint64_t;
  static constexpr std::size_t npos = boost::dynamic_bitset<Block>::npos;

  SetBits() = default;
  explicit SetBits(std::size_t ground_size) : bits_(ground_size) {}
  explicit SetBits(GroundSet ground) : bits_(ground.size()) {}

  static SetBits full(std::size_t ground_size) {
    SetBits s(ground_size);
    s.bits_.set();
    return s;
  }

  static SetBits of(std::size_t ground_size, std::span<const std::size_t> elements) {
    SetBits s(ground_size);
    for (std::size_t e : elements) s.insert(e);
    return s;
  }
  static SetBits of(std::size_t ground_size, std::initializer_list<std::size_t> elements) {
    return of(ground_size, std::span<const std::size_t>(elements.begin(), elements.size()));
  }

  std::size_t ground_size() const { return bits_.size(); }
  std::size_t count() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }

  bool contains(std::size_t n) const { return n < bits_.size() && bits_.test(n); }

  void insert(std::size_t n) {
    check_element(n);
    bits_.set(n);
  }
  void erase(std::size_t n) {
    check_element(n);
    bits_.reset(n);
  }
  void toggle(std::size_t n) {
    check_element(n);
    bits_.flip(n);
  }

  std::size_t first() const { return bits_.find_first(); }
  std::size_t next(std::size_t after) const { return bits_.find_next(after); }

  std::vector<std::size_t> elements() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for (auto i = first(); i != npos; i = next(i)) out.push_back(i);
    return out;
  }

  bool is_subset_of(const SetBits& other) const {
    check_same_ground(other);
    return bits_.is_subset_of(other.bits_);
  }

  SetBits& operator|=(const SetBits& o) { check_same_ground(o); bits_ |= o.bits_; return *this; }
  SetBits& operator&=(const SetBits& o) { check_same_ground(o); bits_ &= o.bits_; return *this; }
  SetBits& operator^=(const SetBits& o) { check_same_ground(o); bits_ ^= o.bits_; return *this; }
  SetBits& operator-=(const SetBits& o) { check_same_ground(o); bits_ -= o.bits_; return *this; }

  friend SetBits operator|(SetBits a, const SetBits& b) { return a |= b; }
  friend SetBits operator&(SetBits a, const SetBits& b) { return a &= b; }
  friend SetBits operator^(SetBits a, const SetBits& b) { return a ^= b; }
  /// Set difference.
  friend SetBits operator-(SetBits a, const SetBits& b) { return a -= b; }

  friend bool operator==(const SetBits& a, const SetBits& b) { return a.bits_ == b.bits_; }

  /// "{0,3,5}"
  std::string to_string() const {
    std::string out = "{";
    bool first_elem = true;
    for (auto i = first(); i != npos; i = next(i)) {
      if (!first_elem) out += ',';
      out += std::to_string(i);
      first_elem = false;
    }
    return out + "}";
  }

 private:
  void check_element(std::size_t n) const {
    if (n >= bits_.size()) {
      throw InputError("element " + std::to_string(n) + " outside ground of size " +
                       std::to_string(bits_.size()));
    }
  }
  void check_same_ground(const SetBits& o) const {
    if (o.bits_.size() != bits_.size()) {
      throw InputError("ground mismatch: " + std::to_string(bits_.size()) + " vs " +
                       std::to_string(o.bits_.size()));
    }
  }

  boost::dynamic_bitset<Block> bits_;
};

}  // namespace barely
