#include "cocycle_lab/regions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "cocycle_lab/error.hpp"

namespace cocycle_lab {

namespace {

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kRegionEqualityTol * std::max(std::abs(a), std::abs(b));
}

bool is_discontinuity(RegionLabel l) {
  switch (l) {
    case RegionLabel::theorem_a_discontinuity:
    case RegionLabel::boundary_remark2:
    case RegionLabel::bn_discontinuity:
    case RegionLabel::butler_discontinuity:
    case RegionLabel::bocker_viana_discontinuity:
    case RegionLabel::remark1_discontinuity:
      return true;
    default:
      return false;
  }
}

void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

std::vector<double> grid(SweepRange r, int steps) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(std::max(steps, 0)));
  for (int i = 0; i < steps; ++i) {
    xs.push_back(steps == 1 ? r.lo : r.lo + (r.hi - r.lo) * static_cast<double>(i) / (steps - 1));
  }
  return xs;
}

void check_range(SweepRange r, const char* name) {
  if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo > 1.0 && r.hi >= r.lo)) {
    throw Error(ErrorKind::invalid_parameter, std::string(name) + " range must satisfy 1 < lo <= hi");
  }
}

}  // namespace

const char* to_string(RegionLabel label) noexcept {
  switch (label) {
    case RegionLabel::fiber_bunched_continuity: return "FIBER_BUNCHED_CONTINUITY";
    case RegionLabel::theorem_a_discontinuity: return "THEOREM_A_DISCONTINUITY";
    case RegionLabel::boundary_remark2: return "BOUNDARY_REMARK2";
    case RegionLabel::bn_discontinuity: return "BN_DISCONTINUITY";
    case RegionLabel::butler_discontinuity: return "BUTLER_DISCONTINUITY";
    case RegionLabel::bocker_viana_discontinuity: return "BOCKER_VIANA_DISCONTINUITY";
    case RegionLabel::remark1_discontinuity: return "REMARK1_DISCONTINUITY";
    case RegionLabel::zero_exponent_locus: return "ZERO_EXPONENT_LOCUS";
    case RegionLabel::unresolved: return "UNRESOLVED";
  }
  return "UNRESOLVED";
}

bool RegionReport::has(RegionLabel label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

bool RegionReport::any_discontinuity() const {
  return std::any_of(labels.begin(), labels.end(), is_discontinuity);
}

std::string RegionReport::joined_labels() const {
  std::string out;
  for (auto l : labels) {
    if (!out.empty()) out.push_back('|');
    out += to_string(l);
  }
  return out;
}

RegionReport classify(const ParameterPoint& pt) {
  if (!(std::isfinite(pt.sigma) && pt.sigma > 1.0 && std::isfinite(pt.eta) && pt.eta > 1.0)) {
    throw Error(ErrorKind::invalid_parameter, "sigma and eta must be finite and > 1");
  }
  if (!(std::isfinite(pt.alpha) && pt.alpha > 0.0)) throw Error(ErrorKind::invalid_parameter, "alpha must be > 0");
  if (!(pt.p > 0.0 && pt.p < 1.0)) throw Error(ErrorKind::invalid_parameter, "p must lie in (0, 1)");

  RegionReport r;
  r.point = pt;
  auto& w = r.witness;
  w.sig2 = pt.sigma * pt.sigma;
  w.eta2 = pt.eta * pt.eta;
  w.pow_a = std::exp2(pt.alpha);
  w.pow_2a = std::exp2(2.0 * pt.alpha);
  w.pow_3a = std::exp2(3.0 * pt.alpha);
  w.pow_4a = std::exp2(4.0 * pt.alpha);
  w.sigma3_over_eta = pt.sigma * pt.sigma * pt.sigma / pt.eta;
  w.zero_exponent_p = std::log(pt.eta) / std::log(pt.sigma * pt.eta);

  const bool on_locus = nearly_equal(pt.p, w.zero_exponent_p);
  const bool oriented = pt.eta <= pt.sigma;
  const bool eta_at_3a = nearly_equal(w.eta2, w.pow_3a);

  auto add = [&](RegionLabel l) { r.labels.push_back(l); };

  // Bunched iff the larger diagonal entry squared is below 2^alpha.
  if (std::max(w.sig2, w.eta2) < w.pow_a) add(RegionLabel::fiber_bunched_continuity);
  if (!on_locus) {
    if (oriented) {
      if (w.pow_3a < w.eta2 && !eta_at_3a) add(RegionLabel::theorem_a_discontinuity);
      if (eta_at_3a && pt.eta < pt.sigma) add(RegionLabel::boundary_remark2);
      if ((w.eta2 >= w.pow_3a || eta_at_3a) && pt.p > 2.0 / 3.0) add(RegionLabel::bn_discontinuity);
      if (w.eta2 >= w.pow_2a && pt.p > 0.75) add(RegionLabel::butler_discontinuity);
      if (w.eta2 > w.pow_4a) add(RegionLabel::bocker_viana_discontinuity);
    } else if (w.pow_3a < w.sigma3_over_eta) {
      add(RegionLabel::remark1_discontinuity);
    }
  }
  if (on_locus) add(RegionLabel::zero_exponent_locus);
  const bool resolved = r.has(RegionLabel::fiber_bunched_continuity) || r.any_discontinuity();
  if (!resolved) add(RegionLabel::unresolved);
  std::sort(r.labels.begin(), r.labels.end());
  return r;
}

std::vector<RegionReport> sweep(double alpha, double p, SweepRange sigma_range, SweepRange eta_range,
                                int grid_steps) {
  check_range(sigma_range, "sigma");
  check_range(eta_range, "eta");
  if (grid_steps < 1) throw Error(ErrorKind::invalid_parameter, "grid_steps must be >= 1");
  std::vector<RegionReport> rows;
  for (double s : grid(sigma_range, grid_steps)) {
    for (double e : grid(eta_range, grid_steps)) {
      if (e > s) continue;
      rows.push_back(classify({s, e, alpha, p}));
    }
  }
  if (rows.empty()) throw Error(ErrorKind::invalid_parameter, "no grid cell satisfies eta <= sigma");
  return rows;
}

std::vector<RegionReport> sweep_diagonal(double alpha, double p, SweepRange range, int grid_steps) {
  check_range(range, "sigma = eta");
  if (grid_steps < 1) throw Error(ErrorKind::invalid_parameter, "grid_steps must be >= 1");
  std::vector<RegionReport> rows;
  for (double s : grid(range, grid_steps)) rows.push_back(classify({s, s, alpha, p}));
  return rows;
}

std::string to_csv_row(const RegionReport& r) {
  std::string out;
  const auto& w = r.witness;
  for (double v : {r.point.sigma, r.point.eta, r.point.alpha, r.point.p}) {
    append_number(out, v);
    out.push_back(',');
  }
  out += r.joined_labels();
  for (double v : {w.sig2, w.eta2, w.pow_a, w.pow_2a, w.pow_3a, w.pow_4a}) {
    out.push_back(',');
    append_number(out, v);
  }
  return out;
}

}  // namespace cocycle_lab
