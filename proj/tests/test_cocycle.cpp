#include <cmath>
#include <random>

#include "doctest.h"

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/error.hpp"
#include "cocycle_lab/mat2.hpp"

using namespace cocycle_lab;

namespace {

constexpr double kGamma = 4.0 / 3.0;

bool same(const Mat2& a, const Mat2& b, double rel) {
  const double scale = std::max({std::abs(a.a11), std::abs(a.a12), std::abs(a.a21), std::abs(a.a22), 1e-300});
  return std::abs(a.a11 - b.a11) <= rel * scale && std::abs(a.a12 - b.a12) <= rel * scale &&
         std::abs(a.a21 - b.a21) <= rel * scale && std::abs(a.a22 - b.a22) <= rel * scale;
}

// Operator norm as the square root of the top eigenvalue of the symmetric
// matrix m^T m = [[g11, g12], [g12, g22]].
double oracle_norm(const Mat2& m) {
  const double g11 = m.a11 * m.a11 + m.a21 * m.a21;
  const double g22 = m.a12 * m.a12 + m.a22 * m.a22;
  const double g12 = m.a11 * m.a12 + m.a21 * m.a22;
  return std::sqrt(0.5 * (g11 + g22) + std::hypot(0.5 * (g11 - g22), g12));
}

// B_n^n on Z_n as the literal product of its 2k + 1 factors.
Mat2 factor_product(double sigma, double eta, double gamma, int k) {
  const double eps = std::pow(eta, -gamma * k);
  const double delta = std::pow(eta, k * (gamma - 2.0));
  const double beta = std::pow(eta, k * (2.0 - gamma)) * std::pow(sigma, -2.0 * k);
  const double c = 1.0 / std::sqrt(1.0 + delta * delta);
  const Mat2 a0 = Mat2::diag(1.0 / eta, eta), a1 = Mat2::diag(sigma, 1.0 / sigma);
  Mat2 prod = Mat2::identity();
  for (int t = 0; t <= 2 * k; ++t) {
    Mat2 r = Mat2::identity();
    if (t == 0) r = {1.0, 0.0, eps, 1.0};
    if (t == k) r = {c, -c * delta, c * delta, c};
    if (t == 2 * k) r = {1.0, 0.0, beta, 1.0};
    prod = (t < k ? a0 : a1) * r * prod;
  }
  return prod;
}

Word z_context(int k, std::uint64_t free_bits) {
  // Coordinates [-2k, 4k]: w on [0, 2k], free bits elsewhere.
  std::vector<std::uint8_t> s(static_cast<std::size_t>(6 * k + 1));
  int bit = 0;
  for (int i = -2 * k; i <= 4 * k; ++i) {
    auto& x = s[static_cast<std::size_t>(i + 2 * k)];
    if (i >= 0 && i <= 2 * k) {
      x = i < k ? 0 : 1;
    } else {
      x = (free_bits >> bit++) & 1u;
    }
  }
  return Word(-2 * k, s);
}

// Max over all pairs of window codes, no pruning.
double brute_seminorm(const LocallyConstantCocycle& coc, double alpha) {
  const int lo = coc.lo(), width = coc.width();
  double best = 0.0;
  const std::uint64_t count = 1ull << width;
  for (std::uint64_t u = 0; u < count; ++u) {
    const Mat2 mu = coc.value(u);
    for (std::uint64_t v = u + 1; v < count; ++v) {
      int radius = 1 << 20;
      for (int i = 0; i < width; ++i) {
        if (((u ^ v) >> i) & 1u) radius = std::min(radius, std::abs(lo + i));
      }
      best = std::max(best, std::exp2(alpha * radius) * oracle_norm(mu - coc.value(v)));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("construction parameters") {
  const ConstructionParams p{4.0, 2.0, 0.4, kGamma, 1};
  CHECK(p.n() == 3);
  CHECK(p.eps() == doctest::Approx(0.39685).epsilon(1e-5));
  CHECK(p.delta() == doctest::Approx(0.62996).epsilon(1e-5));
  CHECK(p.beta() == doctest::Approx(0.09921).epsilon(1e-4));
  CHECK(p.eps() * p.delta() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(p.beta() * p.delta() == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
  CHECK(p.c() * p.c() * (1 + p.delta() * p.delta()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(ConstructionParams(1.0, 2.0, 0.4, kGamma, 1), Error);
  CHECK_THROWS_AS(ConstructionParams(4.0, 2.0, 0.0, kGamma, 1), Error);
  CHECK_THROWS_AS(ConstructionParams(4.0, 2.0, 0.4, 2.0, 1), Error);
  CHECK_THROWS_AS(ConstructionParams(4.0, 2.0, 0.4, 0.9, 1), Error);
  CHECK_THROWS_AS(ConstructionParams(4.0, 2.0, 0.4, kGamma, 0), Error);
  CHECK_THROWS_AS(ConstructionParams(4.0, 2.0, 0.4, kGamma, ConstructionParams::kMaxK + 1), Error);
}

TEST_CASE("base cocycle values") {
  const auto a = build_base(4.0, 2.0);
  CHECK(a.value(Word::parse(0, "0")) == Mat2::diag(0.5, 2.0));
  CHECK(a.value(Word::parse(0, "1")) == Mat2::diag(4.0, 0.25));
  for (double s : {1.1, 3.0, 7.5}) {
    for (double e : {1.05, 2.0, 9.0}) {
      const auto b = build_base(s, e);
      CHECK(b.value(WindowCode{0}).det() == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(b.value(WindowCode{1}).det() == doctest::Approx(1.0).epsilon(1e-15));
    }
  }
  CHECK_THROWS_AS(build_base(1.0, 2.0), Error);
}

TEST_CASE("perturbation values") {
  for (int k = 1; k <= 3; ++k) {
    const ConstructionParams p{4.0, 2.0, 0.4, kGamma, k};
    const auto r = build_perturbation(p);
    CHECK(r.lo() == -2 * k);
    CHECK(r.hi() == 2 * k);
    const WindowCode all_ones = (WindowCode{1} << r.width()) - 1;
    CHECK(r.value(all_ones) == Mat2::identity());
    int non_identity = 0;
    for (WindowCode code = 0; code < (WindowCode{1} << r.width()); ++code) {
      const Mat2 m = r.value(code);
      CHECK(m.det() == doctest::Approx(1.0).epsilon(1e-14));
      if (!(m == Mat2::identity())) ++non_identity;
    }
    CHECK(non_identity == 3 * (1 << (2 * k)));
  }
}

TEST_CASE("perturbed cocycle values") {
  const int k = 2;
  const ConstructionParams p{4.0, 2.0, 0.4, kGamma, k};
  const auto b = build_perturbed(p);
  // x in Z_n, arbitrary context elsewhere.
  const Word z = Word::parse(-4, "1011" "00111");
  const Mat2 m = b.value(z);
  CHECK(m.a11 == doctest::Approx(0.5));
  CHECK(m.a12 == 0.0);
  CHECK(m.a21 == doctest::Approx(2.0 * p.eps()));
  CHECK(m.a22 == doctest::Approx(2.0));
  // Matches no special cylinder, x_0 = 1.
  CHECK(b.value(Word::parse(-4, "111111111")) == Mat2::diag(4.0, 0.25));
  for (int kk = 1; kk <= 3; ++kk) {
    const auto bk = build_perturbed({4.0, 2.0, 0.4, kGamma, kk});
    for (WindowCode code = 0; code < (WindowCode{1} << bk.width()); ++code) {
      CHECK(bk.value(code).det() == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("iterate") {
  const auto a = build_base(4.0, 2.0);
  CHECK(iterate(a, Word::parse(0, "01"), 0) == Mat2::identity());
  CHECK(iterate(a, Word::parse(0, "01"), 2) == Mat2::diag(2.0, 0.5));
  CHECK_THROWS_AS(iterate(a, Word::parse(0, "01"), 3), Error);
}

TEST_CASE("closed form of B_n^n") {
  for (int k = 1; k <= 4; ++k) {
    const ConstructionParams p{4.0, 2.0, 0.4, kGamma, k};
    const Mat2 cf = closed_form_Bn(p);
    CHECK(cf.a11 == 0.0);
    CHECK(cf.a22 == 0.0);
    CHECK(cf.det() == doctest::Approx(1.0).epsilon(1e-12));
    const Mat2 oracle = factor_product(4.0, 2.0, kGamma, k);
    CHECK(std::abs(cf.a12 - oracle.a12) <= 1e-10 * std::abs(oracle.a12));
    CHECK(std::abs(cf.a21 - oracle.a21) <= 1e-10 * std::abs(oracle.a21));
    CHECK(std::max(std::abs(oracle.a11), std::abs(oracle.a22)) <= 1e-9 * oracle_norm(oracle));
  }
}

TEST_CASE("iterating B_n over every Z_n context matches the closed form") {
  for (int k = 1; k <= 3; ++k) {
    for (double gamma : {1.0, kGamma, 1.9}) {
      const ConstructionParams p{3.5, 1.7, 0.4, gamma, k};
      const auto b = build_perturbed(p);
      const Mat2 cf = closed_form_Bn(p);
      for (std::uint64_t bits = 0; bits < (1ull << (4 * k)); ++bits) {
        const Mat2 m = iterate(b, z_context(k, bits), 2 * k + 1);
        CHECK(same(m, cf, 1e-10));
        CHECK(std::max(std::abs(m.a11), std::abs(m.a22)) <= 1e-9 * spectral_norm(m));
      }
    }
  }
}

TEST_CASE("sup norm") {
  CHECK(sup_norm(build_base(4.0, 2.0)) == 4.0);
  CHECK(sup_norm(identity_cocycle()) == 1.0);
  for (int k = 1; k <= 4; ++k) {
    const ConstructionParams p{4.0, 2.0, 0.4, kGamma, k};
    const double s = sup_norm(difference(build_base(4.0, 2.0), build_perturbed(p)));
    CHECK(s > 0.0);
    CHECK(s <= 4.0 * std::max({p.beta(), p.delta(), p.eps()}) * (1 + 1e-12));
  }
}

TEST_CASE("Holder seminorm examples") {
  CHECK(holder_seminorm_exact(identity_cocycle(), 0.7) == 0.0);
  const auto a = build_base(4.0, 2.0);
  for (double alpha : {0.1, 0.4, 2.0}) {
    CHECK(holder_seminorm_exact(a, alpha) == doctest::Approx(3.5).epsilon(1e-15));
    const auto h = holder_norm_exact(a, alpha);
    CHECK(h.norm == doctest::Approx(7.5).epsilon(1e-15));
    CHECK(h.exact);
  }
}

TEST_CASE("pruned seminorm equals unpruned enumeration") {
  for (int k = 1; k <= 2; ++k) {
    for (double alpha : {0.2, 0.4, 0.8}) {
      const ConstructionParams p{4.0, 2.0, alpha, kGamma, k};
      const auto diff = difference(build_base(4.0, 2.0), build_perturbed(p));
      CHECK(holder_seminorm_exact(diff, alpha) == doctest::Approx(brute_seminorm(diff, alpha)).epsilon(1e-12));
      CHECK(holder_seminorm_exact(diff, alpha, 3) == holder_seminorm_exact(diff, alpha, 1));
    }
  }
}

TEST_CASE("exact Holder distance stays below the bound") {
  for (int k = 1; k <= 4; ++k) {
    for (double alpha : {0.2, 0.4}) {
      const ConstructionParams p{4.0, 2.0, alpha, kGamma, k};
      const auto diff = difference(build_base(4.0, 2.0), build_perturbed(p));
      CHECK(holder_norm_exact(diff, alpha).norm <= holder_bound(p));
    }
  }
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const double eta = 1.2 + 2.0 * u(gen);
    const double sigma = eta * (1.0 + 2.0 * u(gen));
    const double alpha = 0.05 + u(gen);
    const double gamma = 1.0 + 0.99 * u(gen);
    const int k = 1 + static_cast<int>(gen() % 2);
    const ConstructionParams p{sigma, eta, alpha, gamma, k};
    const auto diff = difference(build_base(sigma, eta), build_perturbed(p));
    CHECK(holder_norm_exact(diff, alpha).norm <= holder_bound(p) * (1 + 1e-12));
  }
}

TEST_CASE("Holder norm is monotone in alpha") {
  const ConstructionParams p{4.0, 2.0, 0.4, kGamma, 2};
  const auto diff = difference(build_base(4.0, 2.0), build_perturbed(p));
  double prev = 0.0;
  for (double alpha : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
    const double norm = holder_norm_exact(diff, alpha).norm;
    CHECK(norm >= prev);
    prev = norm;
  }
}

TEST_CASE("Holder distance shrinks with k") {
  const double alpha = 0.4;
  std::vector<double> exact;
  for (int k = 1; k <= 4; ++k) {
    const ConstructionParams p{4.0, 2.0, alpha, kGamma, k};
    exact.push_back(holder_norm_exact(difference(build_base(4.0, 2.0), build_perturbed(p)), alpha).norm);
  }
  CHECK(exact.back() < exact.front());
}

TEST_CASE("bound decays to zero under the decay conditions") {
  const ConstructionParams p{4.0, 2.0, 0.4, kGamma, 1};
  REQUIRE(bound_decays(p));
  double prev = holder_bound(p);
  for (int k = 2; k <= ConstructionParams::kMaxK; ++k) {
    const double b = holder_bound(p.with_k(k));
    CHECK(b < prev);
    prev = b;
  }
  CHECK(prev < 0.05 * holder_bound(p));
  CHECK_FALSE(bound_decays(p.with_alpha(0.8)));
  // With the decay flag off the bound stops shrinking.
  const auto q = p.with_alpha(0.8);
  CHECK(holder_bound(q.with_k(12)) > holder_bound(q.with_k(11)));
}

TEST_CASE("the eta^gamma condition implies the sigma ratio condition") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int implied = 0;
  for (int i = 0; i < 20000; ++i) {
    const double eta = 1.01 + 4.0 * u(gen);
    const double sigma = eta * (1.0 + 3.0 * u(gen)) + 1e-9;
    const double gamma = 1.0 + 0.999 * u(gen);
    const double alpha = 0.01 + 2.0 * u(gen);
    const auto c = decay_conditions({sigma, eta, alpha, gamma, 1});
    if (c.eta_gamma) {
      ++implied;
      CHECK(c.sigma_ratio);
    }
  }
  CHECK(implied > 1000);
}

TEST_CASE("at gamma = 4/3 both remaining conditions read 2^(3 alpha) < eta^2") {
  std::mt19937_64 gen(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    const double eta = 1.01 + 4.0 * u(gen);
    const double alpha = 0.01 + 2.0 * u(gen);
    const double lhs = std::exp2(3 * alpha), rhs = eta * eta;
    if (std::abs(lhs / rhs - 1.0) < 1e-9) continue;
    const auto c = decay_conditions({eta * 2.0, eta, alpha, kGamma, 1});
    CHECK(c.eta_gamma == (lhs < rhs));
    CHECK(c.eta_delta == (lhs < rhs));
  }
}

TEST_CASE("fiber bunching examples") {
  const auto bunched = fiber_bunching_test(build_base(1.2, 1.1), 1.0, 12);
  REQUIRE(bunched.bunched_at.has_value());
  CHECK(*bunched.bunched_at == 1);

  const auto miss = fiber_bunching_test(build_base(4.0, 2.0), 0.4, 10);
  CHECK_FALSE(miss.bunched_at.has_value());
  CHECK(miss.last_n == 10);
  REQUIRE(miss.worst_context.has_value());
  CHECK(miss.worst_context->count_ones() == miss.worst_context->size());
  CHECK(miss.worst_ratio == doctest::Approx(std::pow(4.0, 20)).epsilon(1e-12));

  const auto id = fiber_bunching_test(identity_cocycle(), 0.01, 4);
  REQUIRE(id.bunched_at.has_value());
  CHECK(*id.bunched_at == 1);
}

TEST_CASE("capacity limits") {
  const ConstructionParams big{4.0, 2.0, 0.4, kGamma, 6};
  const auto diff = difference(build_base(4.0, 2.0), build_perturbed(big));
  try {
    holder_seminorm_exact(diff, 0.4);
    FAIL("expected capacity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::capacity);
  }
  try {
    fiber_bunching_test(build_perturbed(big), 0.4, 12);
    FAIL("expected capacity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::capacity);
  }
}

TEST_CASE("widened cocycle reads the same values") {
  const auto b = build_perturbed({4.0, 2.0, 0.4, kGamma, 1});
  const auto w = b.widened(-4, 4);
  std::mt19937_64 gen(41);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::uint8_t> s(9);
    for (auto& x : s) x = gen() & 1u;
    const Word word(-4, s);
    CHECK(w.value(word) == b.value(word.slice(-2, 2)));
  }
}
