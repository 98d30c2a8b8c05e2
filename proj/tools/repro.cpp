#include "repro.hpp"

#include <cmath>
#include <optional>

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/lyapunov.hpp"
#include "cocycle_lab/regions.hpp"

namespace cocycle_lab_tools {

namespace cl = cocycle_lab;
using cl::Json;

namespace {

constexpr double kSigma = 4.0;
constexpr double kEta = 2.0;
constexpr double kAlpha = 0.4;
constexpr double kGamma = cl::ConstructionParams::kDefaultGamma;

Json criterion(int id, const char* name, bool pass, Json detail) {
  return Json{{"id", id}, {"name", name}, {"pass", pass}, {"detail", std::move(detail)}};
}

Json exact_formula(std::uint64_t seed, unsigned workers) {
  const auto est = cl::mc_exponent(cl::build_base(kSigma, kEta), cl::BernoulliParams(0.5),
                                   {100000, 64, seed, workers, 1});
  const double exact = cl::exact_exponent_base(kSigma, kEta, 0.5);
  const double err = std::abs(est.lambda_plus - exact);
  return criterion(1, "exact-formula agreement", err <= 3.0 * est.std_error && err < 0.01,
                   cl::estimate_to_json(est, exact));
}

Json swap_identity(unsigned workers) {
  bool pass = true;
  Json detail = Json::array();
  for (int k = 1; k <= 3; ++k) {
    const auto r = cl::verify_swap({kSigma, kEta, kAlpha, kGamma, k}, cl::SwapVariant::perturbed, workers);
    pass = pass && r.max_diag_residual <= 1e-9 && r.max_offdiag_rel_error <= 1e-10 && r.max_det_error <= 1e-10;
    Json row = cl::swap_report_to_json(r);
    row["k"] = k;
    detail.push_back(row);
  }
  return criterion(2, "swap identity", pass, detail);
}

Json holder_decay(unsigned workers) {
  bool pass = true;
  std::optional<double> first, last;
  Json rows = Json::array();
  for (int k = 1; k <= 4; ++k) {
    const cl::ConstructionParams params{kSigma, kEta, kAlpha, kGamma, k};
    const auto diff = cl::difference(cl::build_base(kSigma, kEta), cl::build_perturbed(params));
    const auto norm = cl::holder_norm_exact(diff, kAlpha, workers);
    const double bound = cl::holder_bound(params);
    pass = pass && norm.norm <= bound;
    if (!first) first = norm.norm;
    last = norm.norm;
    rows.push_back({{"k", k}, {"exact", norm.norm}, {"bound", bound}});
  }
  const bool decreased = *last < *first;
  const bool no_decay = !cl::bound_decays({kSigma, kEta, 0.8, kGamma, 1});
  return criterion(3, "Holder decay", pass && decreased && no_decay,
                   {{"rows", rows}, {"exact_decreased", decreased}, {"alpha_0.8_decays", !no_decay}});
}

Json induced_antidiagonal(std::uint64_t seed, unsigned workers) {
  const cl::ConstructionParams params{kSigma, kEta, kAlpha, kGamma, 2};
  const auto bn = cl::build_perturbed(params);
  const auto sample = cl::sample_return_excursions(2, cl::BernoulliParams(0.5), 1000, seed, {1000000, workers});
  double worst = 0.0, worst_pair = 0.0;
  std::optional<cl::Mat2> prev;
  for (const auto& exc : sample.excursions) {
    const auto m = cl::induced_matrix(bn, exc);
    worst = std::max(worst, cl::diagonal_residual(m));
    if (prev) worst_pair = std::max(worst_pair, cl::product_offdiagonal_residual(m, *prev));
    prev = m;
  }
  const bool pass = sample.excursions.size() == 1000 && worst <= 1e-9 && worst_pair <= 1e-9;
  return criterion(4, "induced anti-diagonality", pass,
                   {{"count", sample.excursions.size()}, {"max_diag_residual", worst},
                    {"max_pair_offdiag_residual", worst_pair}});
}

Json zero_collapse(std::uint64_t seed, unsigned workers) {
  const auto bn = cl::build_perturbed({kSigma, kEta, kAlpha, kGamma, 3});
  Json rows = Json::array();
  std::vector<double> mags;
  for (std::int64_t steps : {10000, 100000, 1000000}) {
    const auto est = cl::mc_exponent(bn, cl::BernoulliParams(0.5), {steps, 32, seed, workers, 1});
    mags.push_back(std::abs(est.lambda_plus));
    rows.push_back(cl::estimate_to_json(est));
  }
  const bool pass = mags[2] < 0.05 && mags[0] > mags[1] && mags[1] > mags[2];
  return criterion(5, "zero-exponent collapse", pass, rows);
}

Json kac(std::uint64_t seed, unsigned workers) {
  const auto r = cl::kac_statistics(2, cl::BernoulliParams(0.5), 100000, seed, {1000000, workers});
  return criterion(6, "Kac validation", r.rel_error < 0.02 && r.truncation_fraction < 1e-3,
                   cl::kac_report_to_json(r));
}

Json induced_relation(std::uint64_t seed, unsigned workers) {
  const auto r = cl::induced_exponent_check(cl::build_base(kSigma, kEta), cl::BernoulliParams(0.5), 2,
                                            {100000, 64, seed, workers, 1});
  return criterion(7, "induced-exponent relation", r.agrees, cl::induced_report_to_json(r));
}

Json bunching_boundary() {
  int disagreements = 0;
  constexpr int kGrid = 50;
  for (int i = 0; i < kGrid; ++i) {
    const double sigma = 1.0 + (i + 0.5) / kGrid;
    for (int j = 0; j < kGrid; ++j) {
      const double alpha = 0.1 + 1.9 * (j + 0.5) / kGrid;
      const auto r = cl::fiber_bunching_test(cl::build_base(sigma, 1.0 + 0.5 * (sigma - 1.0)), alpha, 12);
      if (r.bunched_at.has_value() != (sigma * sigma < std::exp2(alpha))) ++disagreements;
    }
  }
  return criterion(8, "fiber-bunching boundary", disagreements == 0, {{"disagreements", disagreements}});
}

Json classifier() {
  using L = cl::RegionLabel;
  const auto a = cl::classify({1.2, 1.1, 1.0, 0.5});
  const auto b = cl::classify({4.0, 2.0, 0.4, 0.5});
  const auto c = cl::classify({4.0, 2.0, 0.4, 1.0 / 3.0});
  bool pass = a.labels == std::vector<L>{L::fiber_bunched_continuity} &&
              b.labels == std::vector<L>{L::theorem_a_discontinuity, L::bocker_viana_discontinuity} &&
              c.has(L::zero_exponent_locus) && !c.has(L::theorem_a_discontinuity);

  // Zone order along sigma = eta: continuity, then the p in (3/4, 1) zone
  // from eta^2 = 2^(2 alpha), then THEOREM_A_DISCONTINUITY above eta^2 = 2^(3 alpha).
  const auto rows = cl::sweep_diagonal(kAlpha, 0.8, {1.01, 2.0}, 400);
  int last_cont = -1, first_butler = -1, first_a = -1;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    if (r.has(L::fiber_bunched_continuity)) last_cont = i;
    if (first_butler < 0 && r.has(L::butler_discontinuity)) first_butler = i;
    if (first_a < 0 && r.has(L::theorem_a_discontinuity)) first_a = i;
  }
  pass = pass && last_cont >= 0 && first_butler > last_cont && first_a > first_butler;
  return criterion(9, "region classifier", pass,
                   {{"point_labels", {a.joined_labels(), b.joined_labels(), c.joined_labels()}},
                    {"last_continuity_index", last_cont},
                    {"first_butler_index", first_butler},
                    {"first_theorem_a_index", first_a}});
}

Json determinism(std::uint64_t seed) {
  const bool same = exact_formula(seed, 1).dump() == exact_formula(seed, 8).dump() &&
                    induced_antidiagonal(seed, 1).dump() == induced_antidiagonal(seed, 8).dump() &&
                    zero_collapse(seed, 1).dump() == zero_collapse(seed, 8).dump() &&
                    kac(seed, 1).dump() == kac(seed, 8).dump();
  return criterion(10, "determinism across worker counts", same,
                   {{"workers", {1, 8}}, {"criteria", {1, 4, 5, 6}}});
}

}  // namespace

Json run_repro(std::uint64_t seed, unsigned workers) {
  Json criteria = Json::array();
  criteria.push_back(exact_formula(seed, workers));
  criteria.push_back(swap_identity(workers));
  criteria.push_back(holder_decay(workers));
  criteria.push_back(induced_antidiagonal(seed, workers));
  criteria.push_back(zero_collapse(seed, workers));
  criteria.push_back(kac(seed, workers));
  criteria.push_back(induced_relation(seed, workers));
  criteria.push_back(bunching_boundary());
  criteria.push_back(classifier());
  criteria.push_back(determinism(seed));
  bool pass = true;
  for (const auto& c : criteria) pass = pass && c.at("pass").get<bool>();
  return Json{{"criteria", criteria}, {"pass", pass}};
}

}  // namespace cocycle_lab_tools
