#pragma once

// Finite windows of the two-sided shift on {0,1}^Z, cylinder sets, the
// metric d(x, y) = 2^-N(x, y) and Bernoulli product measures.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cocycle_lab {

/// Symbols on the contiguous index window [lo, hi]; symbols[i] sits at lo + i.
class Word {
 public:
  Word(int lo, std::vector<std::uint8_t> symbols);
  /// From a '0'/'1' string, e.g. Word::parse(-2, "01101").
  static Word parse(int lo, std::string_view text);

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(symbols_.size()) - 1; }
  std::size_t size() const { return symbols_.size(); }
  const std::vector<std::uint8_t>& symbols() const { return symbols_; }

  bool covers(int index) const { return index >= lo() && index <= hi(); }
  /// Coordinate at absolute index; throws invalid_input outside the window.
  std::uint8_t at(int index) const;
  std::uint8_t& at(int index);

  std::size_t count_ones() const;
  /// Restriction to [lo, hi]; must lie inside the window.
  Word slice(int lo, int hi) const;
  /// Bits of the sub-window [lo, hi], bit i = coordinate lo + i. Width <= 64.
  std::uint64_t pack(int lo, int hi) const;
  std::string to_string() const;

  bool operator==(const Word&) const = default;

 private:
  int lo_;
  std::vector<std::uint8_t> symbols_;
};

/// The set of sequences agreeing with `base` on its window.
struct CylinderSpec {
  Word base;

  bool contains(const Word& w) const;
  bool operator==(const CylinderSpec&) const = default;
};

/// Coin measure p*delta_1 + (1 - p)*delta_0 and its product over Z.
class BernoulliParams {
 public:
  explicit BernoulliParams(double p);
  double p() const { return p_; }

 private:
  double p_;
};

/// min{|i| : u_i != v_i} over the shared window, or nullopt when u == v.
/// Requires identical windows with lo <= 0 <= hi.
std::optional<int> first_disagreement_radius(const Word& u, const Word& v);

/// 2^-N for N = first_disagreement_radius; throws undefined_distance on
/// equal words.
double word_distance(const Word& u, const Word& v);

/// p^(#ones) (1 - p)^(#zeros) over the fixed coordinates.
double cylinder_measure(const CylinderSpec& c, const BernoulliParams& b);

/// Cylinder of f^j(c): y is in the image iff y_(i - j) = base_i.
CylinderSpec shift_cylinder(const CylinderSpec& c, int j);

/// True when the two cylinders fix a common index to different symbols.
bool cylinders_disjoint(const CylinderSpec& a, const CylinderSpec& b);

/// I.i.d. symbols on [lo, hi], deterministic in the seed.
Word sample_window(std::uint64_t seed, int lo, int hi, const BernoulliParams& b);

/// Return word w = 0^k 1^(k+1) of length n = 2k + 1.
std::vector<std::uint8_t> return_word(int k);

/// Z_n = [0; 0^k 1^(k+1)], fixing coordinates [0, 2k].
CylinderSpec return_cylinder(int k);

/// Radius of first disagreement for packed codes on a window starting at
/// `lo` (bit i = coordinate lo + i), given diff = u ^ v != 0 and lo <= 0.
int packed_disagreement_radius(std::uint64_t diff, int lo);

}  // namespace cocycle_lab
