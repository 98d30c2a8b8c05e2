#pragma once

// JSON forms of the library's value types. Field names are part of the
// command-line output contract.

#include <optional>

#include "json.hpp"

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/lyapunov.hpp"
#include "cocycle_lab/regions.hpp"
#include "cocycle_lab/shift_space.hpp"

namespace cocycle_lab {

using Json = nlohmann::ordered_json;

/// {"lo": -2, "sym": "01101"}
Json word_to_json(const Word& w);
Word word_from_json(const Json& j);

/// {"kind": "perturbed", "sigma": 4, "eta": 2, "gamma": 1.333, "k": 2}
Json descriptor_to_json(const CocycleDescriptor& d);

/// {"sup", "seminorm", "norm", "alpha", "exact"}
Json holder_norm_to_json(const HolderNorm& h);
Json holder_bound_to_json(const HolderBound& b);

/// {"lambda_plus", "stderr", "trials", "steps"[, "exact"]}
Json estimate_to_json(const ExponentEstimate& e, std::optional<double> exact = std::nullopt);

Json swap_report_to_json(const SwapReport& r);
Json kac_report_to_json(const KacReport& r);
Json bunching_to_json(const BunchingResult& r);
Json induced_report_to_json(const InducedExponentReport& r);
Json region_report_to_json(const RegionReport& r);

}  // namespace cocycle_lab
