#pragma once

// Which continuity / discontinuity results apply to A_(sigma eta) at a
// parameter point (sigma, eta, alpha, p).

#include <string>
#include <vector>

namespace cocycle_lab {

enum class RegionLabel {
  fiber_bunched_continuity,
  theorem_a_discontinuity,
  boundary_remark2,
  bn_discontinuity,
  butler_discontinuity,
  bocker_viana_discontinuity,
  remark1_discontinuity,
  zero_exponent_locus,
  unresolved,
};

const char* to_string(RegionLabel label) noexcept;

struct ParameterPoint {
  double sigma = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  double p = 0.0;
};

/// Quantities the labels are decided on.
struct RegionWitness {
  double sig2 = 0.0;      // sigma^2
  double eta2 = 0.0;      // eta^2
  double pow_a = 0.0;     // 2^alpha
  double pow_2a = 0.0;    // 2^(2 alpha)
  double pow_3a = 0.0;    // 2^(3 alpha)
  double pow_4a = 0.0;    // 2^(4 alpha)
  double sigma3_over_eta = 0.0;
  double zero_exponent_p = 0.0;  // ln eta / ln(sigma eta)
};

struct RegionReport {
  ParameterPoint point;
  std::vector<RegionLabel> labels;  // in enum order
  RegionWitness witness;

  bool has(RegionLabel label) const;
  bool any_discontinuity() const;
  /// Labels joined with '|'.
  std::string joined_labels() const;
};

/// Relative tolerance for the equality loci (the BOUNDARY_REMARK2 line and the zero-exponent locus).
inline constexpr double kRegionEqualityTol = 1e-12;

/// Attaches every label whose hypothesis holds (labels are cumulative).
/// Throws invalid_parameter for sigma, eta <= 1, alpha <= 0 or p outside (0, 1).
RegionReport classify(const ParameterPoint& pt);

struct SweepRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// grid_steps evenly spaced values per axis (endpoints included; a single
/// step takes `lo`). Rows are sigma-major, eta-minor; cells with eta > sigma
/// are skipped. Throws invalid_parameter on an empty grid.
std::vector<RegionReport> sweep(double alpha, double p, SweepRange sigma_range, SweepRange eta_range, int grid_steps);

/// One-parameter sweep along sigma = eta.
std::vector<RegionReport> sweep_diagonal(double alpha, double p, SweepRange range, int grid_steps);

inline constexpr const char* kRegionCsvHeader = "sigma,eta,alpha,p,labels,sig2,eta2,pow_a,pow_2a,pow_3a,pow_4a";

/// One CSV row in the kRegionCsvHeader layout, locale independent.
std::string to_csv_row(const RegionReport& report);

}  // namespace cocycle_lab
