#include "cocycle_lab/shift_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/rng.hpp"

namespace cocycle_lab {

Word::Word(int lo, std::vector<std::uint8_t> symbols) : lo_(lo), symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw Error(ErrorKind::invalid_input, "word must have length >= 1");
  for (auto s : symbols_) {
    if (s > 1) throw Error(ErrorKind::invalid_input, "word symbols must be 0 or 1");
  }
}

Word Word::parse(int lo, std::string_view text) {
  std::vector<std::uint8_t> sym;
  sym.reserve(text.size());
  for (char ch : text) {
    if (ch != '0' && ch != '1') throw Error(ErrorKind::invalid_input, "word text must be over {0,1}");
    sym.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return Word(lo, std::move(sym));
}

std::uint8_t Word::at(int index) const {
  if (!covers(index)) throw Error(ErrorKind::invalid_input, "index outside word window");
  return symbols_[static_cast<std::size_t>(index - lo_)];
}

std::uint8_t& Word::at(int index) {
  if (!covers(index)) throw Error(ErrorKind::invalid_input, "index outside word window");
  return symbols_[static_cast<std::size_t>(index - lo_)];
}

std::size_t Word::count_ones() const {
  return static_cast<std::size_t>(std::count(symbols_.begin(), symbols_.end(), std::uint8_t{1}));
}

Word Word::slice(int lo, int hi) const {
  if (lo > hi || !covers(lo) || !covers(hi)) throw Error(ErrorKind::invalid_input, "slice outside word window");
  auto first = symbols_.begin() + (lo - lo_);
  return Word(lo, std::vector<std::uint8_t>(first, first + (hi - lo + 1)));
}

std::uint64_t Word::pack(int lo, int hi) const {
  if (hi - lo + 1 > 64) throw Error(ErrorKind::capacity, "packed window wider than 64 coordinates");
  if (lo > hi || !covers(lo) || !covers(hi)) throw Error(ErrorKind::insufficient_context, "pack window outside word");
  std::uint64_t code = 0;
  for (int i = lo; i <= hi; ++i) code |= std::uint64_t{symbols_[static_cast<std::size_t>(i - lo_)]} << (i - lo);
  return code;
}

std::string Word::to_string() const {
  std::string out;
  out.reserve(symbols_.size());
  for (auto s : symbols_) out.push_back(static_cast<char>('0' + s));
  return out;
}

bool CylinderSpec::contains(const Word& w) const {
  for (int i = base.lo(); i <= base.hi(); ++i) {
    if (!w.covers(i)) throw Error(ErrorKind::insufficient_context, "word does not cover cylinder window");
    if (w.at(i) != base.at(i)) return false;
  }
  return true;
}

BernoulliParams::BernoulliParams(double p) : p_(p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::invalid_parameter, "Bernoulli p must lie in (0, 1)");
}

std::optional<int> first_disagreement_radius(const Word& u, const Word& v) {
  if (u.lo() != v.lo() || u.hi() != v.hi()) throw Error(ErrorKind::invalid_input, "words must share a window");
  if (u.lo() > 0 || u.hi() < 0) throw Error(ErrorKind::invalid_input, "window must contain coordinate 0");
  std::optional<int> best;
  for (int i = u.lo(); i <= u.hi(); ++i) {
    if (u.at(i) != v.at(i)) {
      const int r = std::abs(i);
      if (!best || r < *best) best = r;
    }
  }
  return best;
}

double word_distance(const Word& u, const Word& v) {
  const auto radius = first_disagreement_radius(u, v);
  if (!radius) throw Error(ErrorKind::undefined_distance, "words agree on the whole window");
  return std::ldexp(1.0, -*radius);
}

double cylinder_measure(const CylinderSpec& c, const BernoulliParams& b) {
  const auto ones = static_cast<double>(c.base.count_ones());
  const auto zeros = static_cast<double>(c.base.size()) - ones;
  return std::pow(b.p(), ones) * std::pow(1.0 - b.p(), zeros);
}

CylinderSpec shift_cylinder(const CylinderSpec& c, int j) {
  return {Word(c.base.lo() - j, c.base.symbols())};
}

bool cylinders_disjoint(const CylinderSpec& a, const CylinderSpec& b) {
  const int lo = std::max(a.base.lo(), b.base.lo());
  const int hi = std::min(a.base.hi(), b.base.hi());
  for (int i = lo; i <= hi; ++i) {
    if (a.base.at(i) != b.base.at(i)) return true;
  }
  return false;
}

Word sample_window(std::uint64_t seed, int lo, int hi, const BernoulliParams& b) {
  if (lo > hi) throw Error(ErrorKind::invalid_input, "sample window requires lo <= hi");
  CounterRng rng(seed, 0);
  std::vector<std::uint8_t> sym(static_cast<std::size_t>(hi - lo + 1));
  for (auto& s : sym) s = rng.bernoulli(b.p());
  return Word(lo, std::move(sym));
}

std::vector<std::uint8_t> return_word(int k) {
  if (k < 1) throw Error(ErrorKind::invalid_parameter, "k must be positive");
  std::vector<std::uint8_t> w(static_cast<std::size_t>(2 * k + 1), 1);
  std::fill_n(w.begin(), k, std::uint8_t{0});
  return w;
}

CylinderSpec return_cylinder(int k) { return {Word(0, return_word(k))}; }

int packed_disagreement_radius(std::uint64_t diff, int lo) {
  // Bits [0, -lo) are negative coordinates, bit -lo is coordinate 0.
  const int neg = -lo;
  int best = 64;
  const std::uint64_t right = neg >= 64 ? 0 : diff >> neg;
  if (right != 0) best = std::countr_zero(right);
  const std::uint64_t left_mask = neg >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << neg) - 1;
  const std::uint64_t left = diff & left_mask;
  if (left != 0) {
    const int top = std::bit_width(left) - 1;  // nearest negative coordinate to 0
    best = std::min(best, neg - top);
  }
  return best;
}

}  // namespace cocycle_lab
