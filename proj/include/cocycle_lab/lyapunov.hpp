#pragma once

// Lyapunov exponents of locally constant cocycles over (shift, mu_p):
// the Birkhoff formula for the diagonal cocycle, a renormalized Monte Carlo
// estimator, the H/V swap check for B_n^n, and first returns to Z_n.
//
// All logarithms are natural.

#include <cstdint>
#include <optional>
#include <vector>

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/mat2.hpp"
#include "cocycle_lab/shift_space.hpp"

namespace cocycle_lab {

struct McOptions {
  std::int64_t steps = 100000;
  int trials = 64;
  std::uint64_t seed = 0;
  unsigned workers = 0;  // 0: hardware concurrency
  int renorm_every = 1;  // renormalize the running product every this many steps
};

struct ExponentEstimate {
  double lambda_plus = 0.0;
  double std_error = 0.0;  // sample standard deviation over trials / sqrt(trials)
  int trials = 0;
  std::int64_t steps = 0;
  std::vector<double> per_trial;

  double lambda_minus() const { return -lambda_plus; }
};

/// |(1 - p) ln eta - p ln sigma|.
double exact_exponent_base(double sigma, double eta, double p);

/// The p at which the base exponent vanishes: ln eta / ln(sigma eta).
double zero_exponent_p(double sigma, double eta);

/// Per trial: sample mu_p coordinates on the fly, multiply the cocycle
/// along the orbit, divide by the operator norm at the renormalization
/// cadence and accumulate the logs. Trial t draws from stream (seed, t) and
/// the mean is reduced in trial order, so the result is independent of the
/// worker count.
ExponentEstimate mc_exponent(const LocallyConstantCocycle& coc, const BernoulliParams& b, const McOptions& opts);

enum class SwapVariant { perturbed, unperturbed };

struct SwapReport {
  double max_diag_residual = 0.0;       // max(|M11|, |M22|) / ||M||
  double max_direction_residual = 0.0;  // |M11| / |M e1| and |M22| / |M e2|
  double max_offdiag_rel_error = 0.0;   // against closed_form_Bn
  double max_det_error = 0.0;
  std::size_t words_checked = 0;

  static constexpr double kTolerance = 1e-9;
  bool pass() const {
    return max_diag_residual <= kTolerance && max_direction_residual <= kTolerance;
  }
};

inline constexpr int kMaxSwapK = 4;

/// Iterates B_n for n = 2k + 1 steps over every context compatible with Z_n
/// (coordinates [0, 2k] fixed to w, the 4k coordinates of [-2k, -1] and
/// [2k + 1, 4k] free). The unperturbed variant uses A_(sigma eta) alone.
SwapReport verify_swap(const ConstructionParams& params, SwapVariant variant = SwapVariant::perturbed,
                       unsigned workers = 1);

/// One first return to Z_n. `word` spans [-2k, return_time + 2k]: the start
/// copy of w sits on [0, 2k] and the returning copy on
/// [return_time, return_time + 2k].
struct ReturnExcursion {
  Word word;
  std::int64_t return_time = 0;
  std::vector<std::uint8_t> excursion;  // the block b between the two copies of w

  int k() const { return static_cast<int>((word.size() - static_cast<std::size_t>(return_time) - 1) / 4); }
};

struct ExcursionOptions {
  std::int64_t horizon = 1000000;  // symbols scanned past the start before giving up
  unsigned workers = 0;
};

struct ExcursionSample {
  std::vector<ReturnExcursion> excursions;
  std::size_t truncated = 0;  // starts with no return inside the horizon
};

/// Excursion i starts from mu_p conditioned on Z_n, drawn from stream
/// (seed, i), and scans forward for the first t > 0 whose coordinates
/// [t, t + 2k] spell w.
ExcursionSample sample_return_excursions(int k, const BernoulliParams& b, std::size_t count, std::uint64_t seed,
                                         const ExcursionOptions& opts = {});

struct KacReport {
  double mean_return = 0.0;
  double std_error = 0.0;
  double expected = 0.0;  // 1 / mu_p(Z_n)
  double rel_error = 0.0;
  std::size_t count = 0;
  std::size_t truncated = 0;
  double truncation_fraction = 0.0;
};

/// Return-time statistics against 1 / ((1 - p)^k p^(k + 1)); truncated
/// excursions are excluded from the mean and counted separately.
KacReport kac_statistics(int k, const BernoulliParams& b, std::size_t count, std::uint64_t seed,
                         const ExcursionOptions& opts = {});

/// B_n^(n + s) along the excursion; anti-diagonal for B_n.
Mat2 induced_matrix(const LocallyConstantCocycle& bn, const ReturnExcursion& exc);
Mat2 induced_matrix(const ConstructionParams& params, const ReturnExcursion& exc);

/// max(|M11|, |M22|) / ||M||.
double diagonal_residual(const Mat2& m);
/// max(|M12|, |M21|) / ||M||.
double offdiagonal_residual(const Mat2& m);
/// Off-diagonal part of a * b measured against ||a|| ||b||. Induced matrices
/// are anti-diagonal with entry ratios near ||M||^2, so the product of two
/// can be far smaller than the product of their norms; this is the scale at
/// which rounding in the factors shows up.
double product_offdiagonal_residual(const Mat2& a, const Mat2& b);

struct InducedExponentReport {
  ExponentEstimate ambient;
  std::optional<double> exact;  // present for the unperturbed base cocycle
  double induced = 0.0;         // log-norm per induced step
  double induced_std_error = 0.0;
  double measure_zn = 0.0;
  double normalized = 0.0;  // induced * mu_p(Z_n)
  double normalized_std_error = 0.0;
  double mean_return = 0.0;
  double ambient_corrected = 0.0;  // ambient * mean_return * mu_p(Z_n)
  double combined_std_error = 0.0;
  std::int64_t induced_steps = 0;  // total over trials
  bool agrees = false;             // |normalized - reference| <= 3 combined_std_error
};

/// Estimates the exponent of the cocycle induced on Z_n (one step per
/// return) from orbits started in Z_n, next to the ambient estimate. The
/// reference for `agrees` is the exact value when known, else the ambient
/// estimate.
InducedExponentReport induced_exponent_check(const LocallyConstantCocycle& coc, const BernoulliParams& b, int k,
                                             const McOptions& opts);

}  // namespace cocycle_lab
