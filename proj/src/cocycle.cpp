#include "cocycle_lab/cocycle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "cocycle_lab/error.hpp"
#include "cocycle_lab/parallel.hpp"

namespace cocycle_lab {

namespace {

constexpr WindowCode low_mask(int width) {
  return width >= 64 ? ~WindowCode{0} : (WindowCode{1} << width) - 1;
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

ConstructionParams::ConstructionParams(double sigma, double eta, double alpha, double gamma, int k)
    : sigma_(sigma), eta_(eta), alpha_(alpha), gamma_(gamma), k_(k) {
  if (!(std::isfinite(sigma) && sigma > 1.0)) throw Error(ErrorKind::invalid_parameter, "sigma must be > 1");
  if (!(std::isfinite(eta) && eta > 1.0)) throw Error(ErrorKind::invalid_parameter, "eta must be > 1");
  if (!(std::isfinite(alpha) && alpha > 0.0)) throw Error(ErrorKind::invalid_parameter, "alpha must be > 0");
  if (!(gamma >= 1.0 && gamma < 2.0)) throw Error(ErrorKind::invalid_parameter, "gamma must lie in [1, 2)");
  if (k < 1 || k > kMaxK) throw Error(ErrorKind::invalid_parameter, "k must lie in [1, 15]");

  const double kk = k;
  const double log_eta = std::log(eta);
  const double log_sigma = std::log(sigma);
  const double eps_exp = -gamma * kk;                // exponent of eta
  const double delta_exp = kk * (gamma - 2.0);       // exponent of eta
  const double beta_exp = kk * (2.0 - gamma);        // exponent of eta, times sigma^(-2k)
  eps_ = std::exp(eps_exp * log_eta);
  delta_ = std::exp(delta_exp * log_eta);
  beta_ = std::exp(beta_exp * log_eta - 2.0 * kk * log_sigma);
  c_ = 1.0 / std::sqrt(1.0 + delta_ * delta_);

  // eps delta = eta^(-2k) and beta delta = sigma^(-2k), in exponent space and in value.
  if (std::abs((eps_exp + delta_exp) + 2.0 * kk) > 1e-12 * kk ||
      std::abs(beta_exp + delta_exp) > 1e-12 * kk ||
      !close_rel(eps_ * delta_, std::exp(-2.0 * kk * log_eta), 1e-12) ||
      !close_rel(beta_ * delta_, std::exp(-2.0 * kk * log_sigma), 1e-12)) {
    throw Error(ErrorKind::invalid_parameter, "perturbation sizes lost their exponent identities");
  }
}

const char* to_string(CocycleKind kind) noexcept {
  switch (kind) {
    case CocycleKind::identity: return "identity";
    case CocycleKind::base: return "base";
    case CocycleKind::perturbation: return "perturbation";
    case CocycleKind::perturbed: return "perturbed";
    case CocycleKind::difference: return "difference";
    case CocycleKind::custom: return "custom";
  }
  return "custom";
}

LocallyConstantCocycle::LocallyConstantCocycle(int lo, int hi, Rule rule, bool sl2, Predicate special,
                                               CocycleDescriptor descriptor)
    : lo_(lo), hi_(hi), rule_(std::move(rule)), sl2_(sl2), special_(std::move(special)),
      descriptor_(std::move(descriptor)) {
  if (lo > 0 || hi < 0) throw Error(ErrorKind::invalid_input, "cocycle window must contain coordinate 0");
  if (hi - lo + 1 > 64) throw Error(ErrorKind::capacity, "cocycle window wider than 64 coordinates");
  if (!rule_) throw Error(ErrorKind::invalid_input, "cocycle rule is empty");
}

Mat2 LocallyConstantCocycle::value(const Word& w) const { return rule_(w.pack(lo_, hi_)); }

LocallyConstantCocycle LocallyConstantCocycle::widened(int lo, int hi) const {
  if (lo > lo_ || hi < hi_) throw Error(ErrorKind::invalid_input, "widened window must contain the original");
  const int offset = lo_ - lo;
  const WindowCode mask = low_mask(width());
  Rule rule = [inner = rule_, offset, mask](WindowCode code) { return inner((code >> offset) & mask); };
  Predicate special;
  if (special_) special = [inner = special_, offset, mask](WindowCode code) { return inner((code >> offset) & mask); };
  return LocallyConstantCocycle(lo, hi, std::move(rule), sl2_, std::move(special), descriptor_);
}

LocallyConstantCocycle identity_cocycle() {
  return LocallyConstantCocycle(
      0, 0, [](WindowCode) { return Mat2::identity(); }, true, [](WindowCode) { return false; },
      CocycleDescriptor{CocycleKind::identity, {}, {}, {}, {}});
}

LocallyConstantCocycle build_base(double sigma, double eta) {
  if (!(std::isfinite(sigma) && sigma > 1.0 && std::isfinite(eta) && eta > 1.0)) {
    throw Error(ErrorKind::invalid_parameter, "base cocycle needs sigma, eta > 1");
  }
  const std::array<Mat2, 2> values{Mat2::diag(1.0 / eta, eta), Mat2::diag(sigma, 1.0 / sigma)};
  return LocallyConstantCocycle(
      0, 0, [values](WindowCode code) { return values[code & 1]; }, true, [](WindowCode) { return false; },
      CocycleDescriptor{CocycleKind::base, sigma, eta, {}, {}});
}

std::optional<int> perturbation_cylinder(int k, WindowCode code) {
  const int n = 2 * k + 1;
  const WindowCode word_mask = low_mask(n);
  const WindowCode word_bits = low_mask(k + 1) << k;  // 0^k 1^(k+1), first symbol in bit 0
  for (int start : {0, -k, -2 * k}) {
    const int shift = start + 2 * k;
    if (((code >> shift) & word_mask) == word_bits) return -start;
  }
  return std::nullopt;
}

namespace {

struct PerturbationValues {
  Mat2 on_zn, on_fk, on_f2k;
};

PerturbationValues perturbation_values(const ConstructionParams& p) {
  return {Mat2{1.0, 0.0, p.eps(), 1.0}, p.c() * Mat2{1.0, -p.delta(), p.delta(), 1.0},
          Mat2{1.0, 0.0, p.beta(), 1.0}};
}

void assert_special_cylinders_disjoint(int k) {
  const auto zn = return_cylinder(k);
  const auto fk = shift_cylinder(zn, k);
  const auto f2k = shift_cylinder(zn, 2 * k);
  if (!cylinders_disjoint(zn, fk) || !cylinders_disjoint(zn, f2k) || !cylinders_disjoint(fk, f2k)) {
    throw Error(ErrorKind::invalid_parameter, "special cylinders overlap");
  }
}

CocycleDescriptor descriptor_for(CocycleKind kind, const ConstructionParams& p) {
  return {kind, p.sigma(), p.eta(), p.gamma(), p.k()};
}

}  // namespace

LocallyConstantCocycle build_perturbation(const ConstructionParams& params) {
  const int k = params.k();
  assert_special_cylinders_disjoint(k);
  const auto vals = perturbation_values(params);
  auto rule = [vals, k](WindowCode code) {
    const auto which = perturbation_cylinder(k, code);
    if (!which) return Mat2::identity();
    if (*which == 0) return vals.on_zn;
    if (*which == k) return vals.on_fk;
    return vals.on_f2k;
  };
  auto special = [k](WindowCode code) { return perturbation_cylinder(k, code).has_value(); };
  return LocallyConstantCocycle(-2 * k, 2 * k, rule, true, special,
                                descriptor_for(CocycleKind::perturbation, params));
}

LocallyConstantCocycle build_perturbed(const ConstructionParams& params) {
  const int k = params.k();
  assert_special_cylinders_disjoint(k);
  const std::array<Mat2, 2> base{Mat2::diag(1.0 / params.eta(), params.eta()),
                                 Mat2::diag(params.sigma(), 1.0 / params.sigma())};
  const auto vals = perturbation_values(params);
  // Z_n has x_0 = 0; f^k(Z_n) and f^2k(Z_n) have x_0 = 1.
  const std::array<Mat2, 3> special_values{base[0] * vals.on_zn, base[1] * vals.on_fk, base[1] * vals.on_f2k};
  auto rule = [base, special_values, k](WindowCode code) {
    const auto which = perturbation_cylinder(k, code);
    if (!which) return base[(code >> (2 * k)) & 1];
    return special_values[static_cast<std::size_t>(*which / k)];
  };
  auto special = [k](WindowCode code) { return perturbation_cylinder(k, code).has_value(); };
  return LocallyConstantCocycle(-2 * k, 2 * k, rule, true, special,
                                descriptor_for(CocycleKind::perturbed, params));
}

LocallyConstantCocycle difference(const LocallyConstantCocycle& a, const LocallyConstantCocycle& b) {
  const int lo = std::min(a.lo(), b.lo());
  const int hi = std::max(a.hi(), b.hi());
  auto wa = a.widened(lo, hi);
  auto wb = b.widened(lo, hi);
  LocallyConstantCocycle::Predicate special;
  if (wa.has_special_set() && wb.has_special_set()) {
    special = [wa, wb](WindowCode code) { return wa.special(code) || wb.special(code); };
  }
  CocycleDescriptor desc = b.descriptor().sigma ? b.descriptor() : a.descriptor();
  desc.kind = CocycleKind::difference;
  return LocallyConstantCocycle(
      lo, hi, [wa, wb](WindowCode code) { return wa.value(code) - wb.value(code); }, false, std::move(special),
      desc);
}

Mat2 iterate(const LocallyConstantCocycle& coc, const Word& segment, int steps) {
  if (steps < 0) throw Error(ErrorKind::invalid_input, "steps must be non-negative");
  if (steps == 0) return Mat2::identity();
  if (segment.lo() > coc.lo() || segment.hi() < coc.hi() + steps - 1) {
    throw Error(ErrorKind::insufficient_context, "segment does not cover every window read");
  }
  const int width = coc.width();
  const auto& sym = segment.symbols();
  WindowCode code = segment.pack(coc.lo(), coc.hi());
  Mat2 product = Mat2::identity();
  for (int t = 0; t < steps; ++t) {
    product = coc.value(code) * product;
    if (t + 1 < steps) {
      const auto next = static_cast<std::size_t>(coc.hi() + t + 1 - segment.lo());
      code = (code >> 1) | (WindowCode{sym[next]} << (width - 1));
    }
  }
  return product;
}

Mat2 closed_form_Bn(const ConstructionParams& p) {
  const double kk = p.k();
  const double le = std::log(p.eta());
  const double ls = std::log(p.sigma());
  const double upper = -std::exp(kk * le + (kk + 1.0) * ls) * p.delta();
  const double lower = std::exp(kk * le - (kk + 1.0) * ls) * (std::exp(-2.0 * kk * le) * p.delta() + p.eps());
  return p.c() * Mat2{0.0, upper, lower, 0.0};
}

double sup_norm(const LocallyConstantCocycle& coc) {
  if (coc.width() > kMaxSupWidth) throw Error(ErrorKind::capacity, "window too wide for sup-norm enumeration");
  const WindowCode count = WindowCode{1} << coc.width();
  double best = 0.0;
  for (WindowCode code = 0; code < count; ++code) best = std::max(best, spectral_norm(coc.value(code)));
  return best;
}

double holder_seminorm_exact(const LocallyConstantCocycle& coc, double alpha, unsigned workers) {
  if (!(std::isfinite(alpha) && alpha >= 0.0)) throw Error(ErrorKind::invalid_parameter, "alpha must be >= 0");
  const int width = coc.width();
  if (width > kMaxTableWidth) {
    throw Error(ErrorKind::capacity, "window too wide for exact Holder enumeration; use holder_bound");
  }
  const std::size_t count = std::size_t{1} << width;
  const int zero_bit = -coc.lo();

  std::vector<Mat2> table(count);
  std::vector<WindowCode> specials;
  std::array<std::optional<Mat2>, 2> defaults;
  for (std::size_t code = 0; code < count; ++code) {
    table[code] = coc.value(code);
    if (coc.special(code)) {
      specials.push_back(code);
      continue;
    }
    auto& slot = defaults[(code >> zero_bit) & 1];
    if (!slot) {
      slot = table[code];
    } else if (!(*slot == table[code])) {
      throw Error(ErrorKind::invalid_input, "default values depend on more than coordinate 0");
    }
  }
  if (static_cast<double>(specials.size()) * static_cast<double>(count) > kMaxHolderPairs) {
    throw Error(ErrorKind::capacity, "Holder pair count above 1e9; use holder_bound");
  }

  std::vector<double> weight(static_cast<std::size_t>(width) + 1);
  for (int r = 0; r <= width; ++r) weight[static_cast<std::size_t>(r)] = std::exp2(alpha * r);

  // Two default words: equal values unless x_0 differs, and then N* = 0.
  double best = 0.0;
  if (defaults[0] && defaults[1]) best = spectral_norm(*defaults[0] - *defaults[1]);

  std::vector<double> per_special(specials.size(), 0.0);
  parallel_for(specials.size(), workers, [&](std::size_t i) {
    const WindowCode u = specials[i];
    const Mat2& mu = table[u];
    double local = 0.0;
    for (std::size_t v = 0; v < count; ++v) {
      const Mat2 d = mu - table[v];
      if (d.a11 == 0.0 && d.a12 == 0.0 && d.a21 == 0.0 && d.a22 == 0.0) continue;
      const int radius = packed_disagreement_radius(u ^ v, coc.lo());
      local = std::max(local, weight[static_cast<std::size_t>(radius)] * spectral_norm_unchecked(d));
    }
    per_special[i] = local;
  });
  for (double v : per_special) best = std::max(best, v);
  return best;
}

HolderNorm holder_norm_exact(const LocallyConstantCocycle& coc, double alpha, unsigned workers) {
  HolderNorm out;
  out.alpha = alpha;
  out.sup = sup_norm(coc);
  out.seminorm = holder_seminorm_exact(coc, alpha, workers);
  out.norm = out.sup + out.seminorm;
  out.exact = true;
  return out;
}

HolderBound holder_bound_terms(const ConstructionParams& p) {
  const double kk = p.k();
  const double s = p.sigma();
  const double e = p.eta();
  const double g = p.gamma();
  const double two_a = std::exp2(2.0 * p.alpha());
  const double one_a = std::exp2(p.alpha());

  HolderBound b;
  b.sup_term = s * std::max({p.beta(), p.delta(), p.eps()});
  b.split_term = 2.0 * b.sup_term;
  b.zn_term = e * std::pow(two_a / std::pow(e, g), kk);
  b.f2k_term = s * std::pow(two_a * std::pow(e, 2.0 - g) / (s * s), kk);
  b.cross_term = one_a * s * (p.beta() + p.delta());
  b.fk_term = s * std::pow(one_a / std::pow(e, 2.0 - g), kk);
  b.total = b.sup_term + std::max({b.split_term, b.zn_term, b.f2k_term, b.cross_term, b.fk_term});
  return b;
}

double holder_bound(const ConstructionParams& params) { return holder_bound_terms(params).total; }

DecayConditions decay_conditions(const ConstructionParams& p) {
  const double two_a = std::exp2(2.0 * p.alpha());
  const double e = p.eta();
  const double s = p.sigma();
  const double g = p.gamma();
  DecayConditions d;
  d.eta_gamma = two_a < std::pow(e, g);
  d.sigma_ratio = two_a < s * s / std::pow(e, 2.0 - g);
  d.eta_delta = two_a < std::pow(e, 2.0 * (2.0 - g));
  d.beta_decays = std::pow(e, 2.0 - g) < s * s;
  return d;
}

BunchingResult fiber_bunching_test(const LocallyConstantCocycle& coc, double alpha, int n_max) {
  if (!(std::isfinite(alpha) && alpha > 0.0)) throw Error(ErrorKind::invalid_parameter, "alpha must be > 0");
  if (n_max < 1) throw Error(ErrorKind::invalid_parameter, "n_max must be >= 1");
  const int width = coc.width();
  if (width + n_max - 1 > kMaxBunchingContextBits) {
    throw Error(ErrorKind::capacity, "bunching contexts exceed 2^24 words");
  }
  const WindowCode mask = low_mask(width);
  std::vector<Mat2> table(std::size_t{1} << width);
  for (std::size_t code = 0; code < table.size(); ++code) table[code] = coc.value(code);

  BunchingResult result;
  for (int n = 1; n <= n_max; ++n) {
    const int length = width + n - 1;
    double worst = -1.0;
    WindowCode worst_code = 0;
    // Depth-first over context symbols; the factor for time t is known once
    // symbol t + width - 1 is placed.
    std::vector<Mat2> prefix(static_cast<std::size_t>(length) + 1, Mat2::identity());
    auto visit = [&](auto&& self, int j, WindowCode code) -> void {
      if (j == length) {
        const Mat2& p = prefix[static_cast<std::size_t>(j)];
        const double top = spectral_norm_unchecked(p);
        const double det = std::abs(p.det());
        const double ratio = det > 0.0 ? top * top / det : std::numeric_limits<double>::infinity();
        if (ratio > worst) {
          worst = ratio;
          worst_code = code;
        }
        return;
      }
      for (WindowCode s = 0; s < 2; ++s) {
        const WindowCode next = code | (s << j);
        const auto idx = static_cast<std::size_t>(j);
        if (j >= width - 1) {
          const int t = j - (width - 1);
          prefix[idx + 1] = table[(next >> t) & mask] * prefix[idx];
        } else {
          prefix[idx + 1] = prefix[idx];
        }
        self(self, j + 1, next);
      }
    };
    visit(visit, 0, 0);

    result.last_n = n;
    result.worst_ratio = worst;
    result.threshold = std::exp2(alpha * n);
    std::vector<std::uint8_t> sym(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i) sym[static_cast<std::size_t>(i)] = (worst_code >> i) & 1;
    result.worst_context = Word(coc.lo(), std::move(sym));
    if (worst < result.threshold) {
      result.bunched_at = n;
      return result;
    }
  }
  return result;
}

}  // namespace cocycle_lab
