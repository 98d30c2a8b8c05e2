#include "cocycle_lab/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/parallel.hpp"
#include "cocycle_lab/rng.hpp"

namespace cocycle_lab {

namespace {

struct MeanStd {
  double mean = 0.0;
  double std_error = 0.0;
};

// Reduced in index order so the result is bit-identical for any worker count.
MeanStd mean_and_stderr(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  out.std_error = std::sqrt(var / static_cast<double>(xs.size()));
  return out;
}

void validate(const McOptions& opts) {
  if (opts.steps < 1) throw Error(ErrorKind::invalid_parameter, "steps must be >= 1");
  if (opts.trials < 2) throw Error(ErrorKind::invalid_parameter, "trials must be >= 2");
  if (opts.renorm_every < 1) throw Error(ErrorKind::invalid_parameter, "renorm_every must be >= 1");
}

// Stream ids for the induced estimator, disjoint from the ambient trials.
constexpr std::uint64_t kInducedStreamOffset = std::uint64_t{1} << 40;

}  // namespace

double exact_exponent_base(double sigma, double eta, double p) {
  if (!(sigma > 1.0 && eta > 1.0 && std::isfinite(sigma) && std::isfinite(eta))) {
    throw Error(ErrorKind::invalid_parameter, "sigma and eta must be > 1");
  }
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::invalid_parameter, "p must lie in (0, 1)");
  return std::abs((1.0 - p) * std::log(eta) - p * std::log(sigma));
}

double zero_exponent_p(double sigma, double eta) { return std::log(eta) / std::log(sigma * eta); }

ExponentEstimate mc_exponent(const LocallyConstantCocycle& coc, const BernoulliParams& b, const McOptions& opts) {
  validate(opts);
  const int width = coc.width();
  const double p = b.p();

  std::vector<double> per_trial(static_cast<std::size_t>(opts.trials));
  parallel_for(per_trial.size(), opts.workers, [&](std::size_t trial) {
    CounterRng rng(opts.seed, trial);
    WindowCode code = 0;
    for (int i = 0; i < width; ++i) code |= WindowCode{rng.bernoulli(p)} << i;

    Mat2 product = Mat2::identity();
    double log_sum = 0.0;
    for (std::int64_t t = 0; t < opts.steps; ++t) {
      product = coc.value(code) * product;
      if ((t + 1) % opts.renorm_every == 0) {
        const double nrm = spectral_norm_unchecked(product);
        log_sum += std::log(nrm);
        product *= 1.0 / nrm;
      }
      code = (code >> 1) | (WindowCode{rng.bernoulli(p)} << (width - 1));
    }
    log_sum += std::log(spectral_norm_unchecked(product));
    per_trial[trial] = log_sum / static_cast<double>(opts.steps);
  });

  const auto stats = mean_and_stderr(per_trial);
  ExponentEstimate est;
  est.lambda_plus = stats.mean;
  est.std_error = stats.std_error;
  est.trials = opts.trials;
  est.steps = opts.steps;
  est.per_trial = std::move(per_trial);
  return est;
}

double diagonal_residual(const Mat2& m) {
  return std::max(std::abs(m.a11), std::abs(m.a22)) / spectral_norm(m);
}

double offdiagonal_residual(const Mat2& m) {
  return std::max(std::abs(m.a12), std::abs(m.a21)) / spectral_norm(m);
}

double product_offdiagonal_residual(const Mat2& a, const Mat2& b) {
  const Mat2 m = a * b;
  return std::max(std::abs(m.a12), std::abs(m.a21)) / (spectral_norm(a) * spectral_norm(b));
}

SwapReport verify_swap(const ConstructionParams& params, SwapVariant variant, unsigned workers) {
  const int k = params.k();
  if (k > kMaxSwapK) throw Error(ErrorKind::capacity, "swap verification enumerates k <= 4 only");
  const int n = params.n();
  const auto coc = variant == SwapVariant::perturbed ? build_perturbed(params)
                                                     : build_base(params.sigma(), params.eta()).widened(-2 * k, 2 * k);
  const Mat2 closed = closed_form_Bn(params);
  const auto w = return_word(k);

  const std::size_t free_bits = static_cast<std::size_t>(4 * k);
  const std::size_t count = std::size_t{1} << free_bits;
  std::vector<SwapReport> partial(count);
  parallel_for(count, workers, [&](std::size_t code) {
    // Segment [-2k, 4k]: free bits fill [-2k, -1] then [2k + 1, 4k].
    std::vector<std::uint8_t> sym(static_cast<std::size_t>(6 * k + 1));
    for (int i = 0; i < 2 * k; ++i) sym[static_cast<std::size_t>(i)] = (code >> i) & 1;
    for (int i = 0; i < n; ++i) sym[static_cast<std::size_t>(2 * k + i)] = w[static_cast<std::size_t>(i)];
    for (int i = 0; i < 2 * k; ++i) sym[static_cast<std::size_t>(4 * k + 1 + i)] = (code >> (2 * k + i)) & 1;
    const Mat2 m = iterate(coc, Word(-2 * k, std::move(sym)), n);

    SwapReport& r = partial[code];
    r.words_checked = 1;
    r.max_diag_residual = diagonal_residual(m);
    const double e1 = std::hypot(m.a11, m.a21);
    const double e2 = std::hypot(m.a12, m.a22);
    r.max_direction_residual = std::max(std::abs(m.a11) / e1, std::abs(m.a22) / e2);
    r.max_offdiag_rel_error = std::max(std::abs(m.a12 - closed.a12) / std::abs(closed.a12),
                                       std::abs(m.a21 - closed.a21) / std::abs(closed.a21));
    r.max_det_error = std::abs(m.det() - 1.0);
  });

  SwapReport out;
  for (const auto& r : partial) {
    out.words_checked += r.words_checked;
    out.max_diag_residual = std::max(out.max_diag_residual, r.max_diag_residual);
    out.max_direction_residual = std::max(out.max_direction_residual, r.max_direction_residual);
    out.max_offdiag_rel_error = std::max(out.max_offdiag_rel_error, r.max_offdiag_rel_error);
    out.max_det_error = std::max(out.max_det_error, r.max_det_error);
  }
  return out;
}

namespace {

// Scans one excursion from stream `rng`. Returns the return time, or nullopt
// when the horizon is exhausted. When `symbols` is given it receives the
// coordinates [-2k, return_time + 2k].
std::optional<std::int64_t> scan_excursion(CounterRng& rng, int k, double p, std::int64_t horizon,
                                           std::vector<std::uint8_t>* symbols) {
  const int n = 2 * k + 1;
  const auto w = return_word(k);
  const WindowCode target = ((WindowCode{1} << (k + 1)) - 1) << k;  // bit i = symbol i of w

  if (symbols) {
    symbols->clear();
    for (int i = 0; i < 2 * k; ++i) symbols->push_back(rng.bernoulli(p));
    symbols->insert(symbols->end(), w.begin(), w.end());
  }
  // `code` holds coordinates [t, t + n - 1] with bit 0 at coordinate t.
  WindowCode code = target;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    const std::uint8_t s = rng.bernoulli(p);
    if (symbols) symbols->push_back(s);
    code = (code >> 1) | (WindowCode{s} << (n - 1));
    if (code == target) return t;
  }
  return std::nullopt;
}

}  // namespace

ExcursionSample sample_return_excursions(int k, const BernoulliParams& b, std::size_t count, std::uint64_t seed,
                                         const ExcursionOptions& opts) {
  if (k < 1 || k > ConstructionParams::kMaxK) throw Error(ErrorKind::invalid_parameter, "k must lie in [1, 15]");
  if (opts.horizon < 1) throw Error(ErrorKind::invalid_parameter, "horizon must be >= 1");
  const int n = 2 * k + 1;
  std::vector<std::optional<ReturnExcursion>> slots(count);
  parallel_for(count, opts.workers, [&](std::size_t i) {
    CounterRng rng(seed, i);
    std::vector<std::uint8_t> sym;
    const auto tau = scan_excursion(rng, k, b.p(), opts.horizon, &sym);
    if (!tau) return;
    // The scan stops once the returning copy of w is complete, which is
    // exactly coordinate tau + 2k.
    const auto middle_end = std::max<std::int64_t>(*tau, n);
    std::vector<std::uint8_t> middle(sym.begin() + 2 * k + n, sym.begin() + 2 * k + middle_end);
    slots[i] = ReturnExcursion{Word(-2 * k, std::move(sym)), *tau, std::move(middle)};
  });
  ExcursionSample out;
  out.excursions.reserve(count);
  for (auto& s : slots) {
    if (s) {
      out.excursions.push_back(std::move(*s));
    } else {
      ++out.truncated;
    }
  }
  return out;
}

KacReport kac_statistics(int k, const BernoulliParams& b, std::size_t count, std::uint64_t seed,
                         const ExcursionOptions& opts) {
  if (k < 1 || k > ConstructionParams::kMaxK) throw Error(ErrorKind::invalid_parameter, "k must lie in [1, 15]");
  if (count < 2) throw Error(ErrorKind::invalid_parameter, "count must be >= 2");
  std::vector<std::int64_t> times(count, -1);
  parallel_for(count, opts.workers, [&](std::size_t i) {
    CounterRng rng(seed, i);
    const auto tau = scan_excursion(rng, k, b.p(), opts.horizon, nullptr);
    if (tau) times[i] = *tau;
  });
  std::vector<double> kept;
  kept.reserve(count);
  KacReport out;
  for (auto t : times) {
    if (t < 0) {
      ++out.truncated;
    } else {
      kept.push_back(static_cast<double>(t));
    }
  }
  const auto stats = mean_and_stderr(kept);
  out.count = kept.size();
  out.mean_return = stats.mean;
  out.std_error = stats.std_error;
  out.expected = 1.0 / cylinder_measure(return_cylinder(k), b);
  out.rel_error = std::abs(out.mean_return - out.expected) / out.expected;
  out.truncation_fraction = static_cast<double>(out.truncated) / static_cast<double>(count);
  return out;
}

Mat2 induced_matrix(const LocallyConstantCocycle& bn, const ReturnExcursion& exc) {
  return iterate(bn, exc.word, static_cast<int>(exc.return_time));
}

Mat2 induced_matrix(const ConstructionParams& params, const ReturnExcursion& exc) {
  return induced_matrix(build_perturbed(params), exc);
}

InducedExponentReport induced_exponent_check(const LocallyConstantCocycle& coc, const BernoulliParams& b, int k,
                                             const McOptions& opts) {
  validate(opts);
  if (k < 1 || k > ConstructionParams::kMaxK) throw Error(ErrorKind::invalid_parameter, "k must lie in [1, 15]");
  const int n = 2 * k + 1;
  const double p = b.p();
  const auto w = return_word(k);
  const WindowCode target = ((WindowCode{1} << (k + 1)) - 1) << k;
  const WindowCode return_mask = (WindowCode{1} << n) - 1;
  const int width = coc.width();

  InducedExponentReport report;
  report.ambient = mc_exponent(coc, b, opts);
  const auto& desc = coc.descriptor();
  if (desc.kind == CocycleKind::base && desc.sigma && desc.eta) {
    report.exact = exact_exponent_base(*desc.sigma, *desc.eta, p);
  } else if (desc.kind == CocycleKind::identity) {
    report.exact = 0.0;
  }
  report.measure_zn = cylinder_measure(return_cylinder(k), b);

  struct TrialOut {
    double induced = 0.0;
    double mean_return = 0.0;
    std::int64_t returns = 0;
  };
  std::vector<TrialOut> trials(static_cast<std::size_t>(opts.trials));
  parallel_for(trials.size(), opts.workers, [&](std::size_t trial) {
    CounterRng rng(opts.seed, kInducedStreamOffset + trial);
    // Orbit symbols on [first, last], with [0, n - 1] forced to w.
    const int first = std::min(coc.lo(), 0);
    const std::int64_t last = std::max<std::int64_t>(opts.steps - 1 + coc.hi(), opts.steps + n - 1);
    std::vector<std::uint8_t> sym(static_cast<std::size_t>(last - first + 1));
    for (auto& s : sym) s = rng.bernoulli(p);
    std::copy(w.begin(), w.end(), sym.begin() - first);
    auto at = [&](std::int64_t index) { return WindowCode{sym[static_cast<std::size_t>(index - first)]}; };

    WindowCode code = 0;
    for (int i = 0; i < width; ++i) code |= at(coc.lo() + i) << i;
    WindowCode ahead = 0;  // coordinates [t + 1, t + n]
    for (int i = 0; i < n; ++i) ahead |= at(1 + i) << i;

    Mat2 product = Mat2::identity();
    double log_sum = 0.0;
    double log_at_return = 0.0;
    std::int64_t returns = 0;
    std::int64_t last_return = 0;
    for (std::int64_t t = 0; t < opts.steps; ++t) {
      product = coc.value(code) * product;
      const double nrm = spectral_norm_unchecked(product);
      log_sum += std::log(nrm);
      product *= 1.0 / nrm;
      if ((ahead & return_mask) == target) {
        // Orbit re-enters Z_n at time t + 1: one more induced step.
        ++returns;
        log_at_return = log_sum;
        last_return = t + 1;
      }
      if (t + 1 < opts.steps) {
        code = (code >> 1) | (at(t + 1 + coc.hi()) << (width - 1));
        ahead = (ahead >> 1) | (at(t + 1 + n) << (n - 1));
      }
    }
    if (returns == 0) return;
    trials[trial] = {log_at_return / static_cast<double>(returns),
                     static_cast<double>(last_return) / static_cast<double>(returns), returns};
  });

  std::vector<double> induced;
  std::vector<double> mean_returns;
  for (const auto& t : trials) {
    if (t.returns == 0) {
      throw Error(ErrorKind::invalid_parameter, "a trial saw no return to Z_n; increase steps");
    }
    induced.push_back(t.induced);
    mean_returns.push_back(t.mean_return);
    report.induced_steps += t.returns;
  }
  const auto ind = mean_and_stderr(induced);
  report.induced = ind.mean;
  report.induced_std_error = ind.std_error;
  report.normalized = ind.mean * report.measure_zn;
  report.normalized_std_error = ind.std_error * report.measure_zn;
  report.mean_return = mean_and_stderr(mean_returns).mean;
  report.ambient_corrected = report.ambient.lambda_plus * report.mean_return * report.measure_zn;
  report.combined_std_error = std::hypot(report.normalized_std_error, report.ambient.std_error);
  const double reference = report.exact.value_or(report.ambient.lambda_plus);
  report.agrees = std::abs(report.normalized - reference) <= 3.0 * report.combined_std_error;
  return report;
}

}  // namespace cocycle_lab
