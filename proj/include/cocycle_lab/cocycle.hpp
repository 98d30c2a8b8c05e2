#pragma once

// Locally constant SL(2) cocycles over the full 2-shift.
//
// A cocycle reads the coordinates [lo, hi] of a point (lo <= 0 <= hi) and
// returns a 2x2 matrix. Windows are passed around packed: bit i of a
// WindowCode is the symbol at coordinate lo + i.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "cocycle_lab/mat2.hpp"
#include "cocycle_lab/shift_space.hpp"

namespace cocycle_lab {

using WindowCode = std::uint64_t;

/// (sigma, eta, alpha, gamma, k) together with the derived perturbation
/// sizes eps = eta^(-gamma k), delta = eta^(k (gamma - 2)),
/// beta = eta^(k (2 - gamma)) sigma^(-2k) and c = 1 / sqrt(1 + delta^2).
class ConstructionParams {
 public:
  static constexpr double kDefaultGamma = 4.0 / 3.0;
  static constexpr int kMaxK = 15;  // window 4k + 1 must fit a WindowCode

  ConstructionParams(double sigma, double eta, double alpha, double gamma, int k);

  double sigma() const { return sigma_; }
  double eta() const { return eta_; }
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }
  int k() const { return k_; }
  int n() const { return 2 * k_ + 1; }

  double eps() const { return eps_; }
  double delta() const { return delta_; }
  double beta() const { return beta_; }
  double c() const { return c_; }

  ConstructionParams with_k(int k) const { return {sigma_, eta_, alpha_, gamma_, k}; }
  ConstructionParams with_alpha(double alpha) const { return {sigma_, eta_, alpha, gamma_, k_}; }

 private:
  double sigma_, eta_, alpha_, gamma_;
  int k_;
  double eps_, delta_, beta_, c_;
};

enum class CocycleKind { identity, base, perturbation, perturbed, difference, custom };

const char* to_string(CocycleKind kind) noexcept;

/// What a cocycle was built from; used for serialization only.
struct CocycleDescriptor {
  CocycleKind kind = CocycleKind::custom;
  std::optional<double> sigma, eta, gamma;
  std::optional<int> k;
};

class LocallyConstantCocycle {
 public:
  using Rule = std::function<Mat2(WindowCode)>;
  using Predicate = std::function<bool(WindowCode)>;

  /// `special`, when given, marks the words whose value may differ from the
  /// default; off that set the value must depend on coordinate 0 only. The
  /// exact Holder enumeration relies on this to prune pairs. An empty
  /// predicate means every word is treated as special.
  LocallyConstantCocycle(int lo, int hi, Rule rule, bool sl2, Predicate special = {},
                         CocycleDescriptor descriptor = {});

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int width() const { return hi_ - lo_ + 1; }
  bool sl2() const { return sl2_; }
  const CocycleDescriptor& descriptor() const { return descriptor_; }

  Mat2 value(WindowCode code) const { return rule_(code); }
  /// Value at the point whose coordinates [lo, hi] are read from `w`.
  Mat2 value(const Word& w) const;

  bool has_special_set() const { return static_cast<bool>(special_); }
  bool special(WindowCode code) const { return !special_ || special_(code); }

  /// Same cocycle reading the larger window [lo, hi].
  LocallyConstantCocycle widened(int lo, int hi) const;

 private:
  int lo_, hi_;
  Rule rule_;
  bool sl2_;
  Predicate special_;
  CocycleDescriptor descriptor_;
};

LocallyConstantCocycle identity_cocycle();

/// A_(sigma eta): diag(1/eta, eta) when x_0 = 0, diag(sigma, 1/sigma) when x_0 = 1.
LocallyConstantCocycle build_base(double sigma, double eta);

/// R_(gamma, n) on the window [-2k, 2k]:
///   [[1, 0], [eps, 1]]              on Z_n        (coordinates [0, 2k] spell w)
///   c [[1, -delta], [delta, 1]]     on f^k(Z_n)   (coordinates [-k, k])
///   [[1, 0], [beta, 1]]             on f^2k(Z_n)  (coordinates [-2k, 0])
///   identity elsewhere.
LocallyConstantCocycle build_perturbation(const ConstructionParams& params);

/// B_n = A_(sigma eta) R_(gamma, n).
LocallyConstantCocycle build_perturbed(const ConstructionParams& params);

/// a - b on the union of the two windows. Not SL(2).
LocallyConstantCocycle difference(const LocallyConstantCocycle& a, const LocallyConstantCocycle& b);

/// Which of the three special cylinders the window code of build_perturbation
/// lies in: 0 for Z_n, k for f^k(Z_n), 2k for f^2k(Z_n), nullopt otherwise.
std::optional<int> perturbation_cylinder(int k, WindowCode code);

/// A^steps along `segment`: value(f^(steps-1) x) ... value(x), where time t
/// reads coordinates [t + lo, t + hi]. The segment must cover
/// [lo, hi + steps - 1].
Mat2 iterate(const LocallyConstantCocycle& coc, const Word& segment, int steps);

/// The anti-diagonal matrix B_n^n(x) for x in Z_n, from its closed form.
Mat2 closed_form_Bn(const ConstructionParams& params);

struct HolderNorm {
  double sup = 0.0;
  double seminorm = 0.0;
  double norm = 0.0;
  double alpha = 0.0;
  bool exact = true;
};

/// Enumeration limits.
inline constexpr int kMaxSupWidth = 26;
inline constexpr int kMaxTableWidth = 22;
inline constexpr double kMaxHolderPairs = 1e9;
inline constexpr int kMaxBunchingContextBits = 24;

/// max over window words of the operator norm.
double sup_norm(const LocallyConstantCocycle& coc);

/// Exact alpha-Holder seminorm: max over word pairs of
/// 2^(alpha N*(u, v)) ||value(u) - value(v)||. Throws capacity (callers fall
/// back to holder_bound) when the pruned pair count exceeds kMaxHolderPairs.
double holder_seminorm_exact(const LocallyConstantCocycle& coc, double alpha, unsigned workers = 1);

HolderNorm holder_norm_exact(const LocallyConstantCocycle& coc, double alpha, unsigned workers = 1);

/// Case terms of the upper bound on ||A_(sigma eta) - B_n||_alpha.
struct HolderBound {
  double sup_term = 0.0;    // S = sigma max(beta, delta, eps)
  double split_term = 0.0;  // 2S: points in different depth-1 cylinders
  double zn_term = 0.0;     // x in Z_n, y outside
  double f2k_term = 0.0;    // x in f^2k(Z_n), y outside f^k u f^2k
  double cross_term = 0.0;  // x in f^k(Z_n), y in f^2k(Z_n)
  double fk_term = 0.0;     // x in f^k(Z_n), y outside f^k u f^2k
  double total = 0.0;       // S + max of the five case terms
};

HolderBound holder_bound_terms(const ConstructionParams& params);
double holder_bound(const ConstructionParams& params);

/// The three inequalities that make every case term decay geometrically in k:
///   eta_gamma:   2^(2 alpha) < eta^gamma
///   sigma_ratio: 2^(2 alpha) < sigma^2 / eta^(2 - gamma)
///   eta_delta:   2^(2 alpha) < eta^(2 (2 - gamma))
struct DecayConditions {
  bool eta_gamma = false;
  bool sigma_ratio = false;
  bool eta_delta = false;
  bool beta_decays = false;  // eta^(2 - gamma) < sigma^2
  bool all() const { return eta_gamma && sigma_ratio && eta_delta && beta_decays; }
};

DecayConditions decay_conditions(const ConstructionParams& params);

/// True when holder_bound(k) decreases to 0 in k.
inline bool bound_decays(const ConstructionParams& params) { return decay_conditions(params).all(); }

struct BunchingResult {
  std::optional<int> bunched_at;  // least N with max ||A^N|| ||(A^N)^-1|| < 2^(alpha N)
  int last_n = 0;                 // last N examined
  double worst_ratio = 0.0;       // max over contexts at last_n
  double threshold = 0.0;         // 2^(alpha last_n)
  std::optional<Word> worst_context;
};

/// Searches N = 1..n_max for uniform fiber bunching over all contexts of
/// length width + N - 1. A miss is reported as bunched_at = nullopt, which
/// is not a proof of non-bunching.
BunchingResult fiber_bunching_test(const LocallyConstantCocycle& coc, double alpha, int n_max);

}  // namespace cocycle_lab
