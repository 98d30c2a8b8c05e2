#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/shift_space.hpp"

using namespace cocycle_lab;

namespace {

Word random_word(std::mt19937_64& gen, int lo, int hi) {
  std::vector<std::uint8_t> s(static_cast<std::size_t>(hi - lo + 1));
  for (auto& x : s) x = static_cast<std::uint8_t>(gen() & 1u);
  return Word(lo, s);
}

// True when a and b fix some shared index to different symbols.
bool windows_conflict(const CylinderSpec& a, const CylinderSpec& b) {
  for (int i = a.base.lo(); i <= a.base.hi(); ++i) {
    if (b.base.covers(i) && a.base.at(i) != b.base.at(i)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("words") {
  const Word w = Word::parse(-2, "01101");
  CHECK(w.lo() == -2);
  CHECK(w.hi() == 2);
  CHECK(w.at(0) == 1);
  CHECK(w.count_ones() == 3);
  CHECK(w.slice(-1, 1).to_string() == "110");
  CHECK(w.pack(-2, 2) == 0b10110u);
  CHECK_THROWS_AS(w.at(3), Error);
  CHECK_THROWS_AS(Word::parse(0, "012"), Error);
  CHECK_THROWS_AS(w.slice(-3, 0), Error);
}

TEST_CASE("first disagreement radius examples") {
  CHECK(first_disagreement_radius(Word::parse(0, "0"), Word::parse(0, "1")) == 0);
  CHECK_FALSE(first_disagreement_radius(Word::parse(-1, "010"), Word::parse(-1, "010")).has_value());
  // Agree at -1, 0, 1, differ at -2.
  CHECK(first_disagreement_radius(Word::parse(-2, "01100"), Word::parse(-2, "11100")) == 2);
  CHECK_THROWS_AS(first_disagreement_radius(Word::parse(-1, "010"), Word::parse(0, "10")), Error);
}

TEST_CASE("word distance examples") {
  CHECK(word_distance(Word::parse(0, "0"), Word::parse(0, "1")) == 1.0);
  CHECK(word_distance(Word::parse(-2, "01100"), Word::parse(-2, "11100")) == 0.25);
  std::vector<std::uint8_t> u(21, 0), v(21, 0);
  v[0] = 1;  // index -10
  CHECK(word_distance(Word(-10, u), Word(-10, v)) == 0.0009765625);
  try {
    word_distance(Word::parse(0, "01"), Word::parse(0, "01"));
    FAIL("expected undefined_distance");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::undefined_distance);
  }
}

TEST_CASE("distance is symmetric and ultrametric") {
  std::mt19937_64 gen(3);
  int checked = 0;
  for (int i = 0; i < 20000; ++i) {
    const Word u = random_word(gen, -4, 4), v = random_word(gen, -4, 4), w = random_word(gen, -4, 4);
    if (u == v || v == w || u == w) continue;
    ++checked;
    CHECK(word_distance(u, v) == word_distance(v, u));
    CHECK(word_distance(u, w) <= std::max(word_distance(u, v), word_distance(v, w)));
  }
  CHECK(checked > 15000);
}

TEST_CASE("packed radius agrees with the word form") {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 5000; ++i) {
    const int lo = -static_cast<int>(gen() % 8);
    const int hi = static_cast<int>(gen() % 8);
    const Word u = random_word(gen, lo, hi), v = random_word(gen, lo, hi);
    if (u == v) continue;
    CHECK(packed_disagreement_radius(u.pack(lo, hi) ^ v.pack(lo, hi), lo) == *first_disagreement_radius(u, v));
  }
}

TEST_CASE("cylinder measure examples") {
  CHECK(cylinder_measure(return_cylinder(1), BernoulliParams(0.5)) == 0.125);
  CHECK(cylinder_measure(return_cylinder(2), BernoulliParams(0.5)) == 1.0 / 32.0);
  CHECK(cylinder_measure({Word::parse(0, "1")}, BernoulliParams(0.8)) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(return_cylinder(2).base.to_string() == "00111");
  CHECK_THROWS_AS(BernoulliParams(0.0), Error);
  CHECK_THROWS_AS(BernoulliParams(1.0), Error);
}

TEST_CASE("cylinders on a window partition the space") {
  for (double p : {0.5, 0.3, 0.9}) {
    const BernoulliParams b(p);
    for (int len = 1; len <= 12; ++len) {
      double total = 0.0;
      for (std::uint64_t code = 0; code < (1ull << len); ++code) {
        std::vector<std::uint8_t> s(static_cast<std::size_t>(len));
        for (int i = 0; i < len; ++i) s[static_cast<std::size_t>(i)] = (code >> i) & 1u;
        total += cylinder_measure({Word(-len / 2, s)}, b);
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("shifting cylinders") {
  const int k = 3;
  const auto z = return_cylinder(k);
  CHECK(shift_cylinder(z, 0) == z);
  const auto f2k = shift_cylinder(z, 2 * k);
  CHECK(f2k.base.lo() == -2 * k);
  CHECK(f2k.base.hi() == 0);
  CHECK(f2k.base.symbols() == z.base.symbols());
  const BernoulliParams b(0.37);
  for (int j = -5; j <= 5; ++j) CHECK(cylinder_measure(shift_cylinder(z, j), b) == cylinder_measure(z, b));
}

TEST_CASE("images of Z_n under the first n - 1 shifts are disjoint") {
  for (int k = 1; k <= 4; ++k) {
    const auto z = return_cylinder(k);
    const int n = 2 * k + 1;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const auto a = shift_cylinder(z, i), b = shift_cylinder(z, j);
        CHECK(windows_conflict(a, b));
        CHECK(cylinders_disjoint(a, b));
      }
    }
  }
  CHECK_FALSE(cylinders_disjoint({Word::parse(0, "01")}, {Word::parse(1, "10")}));
}

TEST_CASE("sampling is deterministic in the seed") {
  const BernoulliParams b(0.5);
  CHECK(sample_window(42, 0, 9, b) == sample_window(42, 0, 9, b));
  CHECK(sample_window(42, 0, 63, b) != sample_window(43, 0, 63, b));
  const Word w = sample_window(1, -3, 5, b);
  CHECK(w.lo() == -3);
  CHECK(w.hi() == 5);
}

TEST_CASE("sampled symbol frequency") {
  for (double p : {0.5, 0.2, 0.85}) {
    const Word w = sample_window(9, 0, 999999, BernoulliParams(p));
    const double freq = static_cast<double>(w.count_ones()) / 1e6;
    CHECK(std::abs(freq - p) <= 3.0 * std::sqrt(p * (1 - p) / 1e6));
  }
  const double near_one = std::nextafter(1.0, 0.0);
  CHECK(sample_window(0, 0, 9999, BernoulliParams(near_one)).count_ones() == 10000);
}
