#pragma once

#include <cstdint>

#include "cocycle_lab/serialize.hpp"

namespace cocycle_lab_tools {

/// Runs the reproduction checks at their reference parameters and returns
/// {"criteria": [{"id", "name", "pass", "detail"}...], "pass": bool}.
cocycle_lab::Json run_repro(std::uint64_t seed, unsigned workers);

}  // namespace cocycle_lab_tools
