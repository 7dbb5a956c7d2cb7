#pragma once

#include "csck/stability.hpp"

#include "json.hpp"

#include <string>
#include <string_view>

namespace csck {

/// {"pieces": [{"a": ["p/q", ...], "b": "p/q"}]}
PLConvexFn pl_from_json(const nlohmann::json& doc);
nlohmann::json pl_to_json(const PLConvexFn& f);

struct ScanSpec {
  ScanFamily family;
  Criterion criterion = Criterion::K;
};

/// TOML scan description:
///   criterion = "K" | "uniform" | "filtrated" | "L1"
///   pairs = false
///   directions = [["1"], ["-1"]]                      # shared offsets below
///   offsets = ["1/4", "1/2"]  or  offsets = { start = "1/4", stop = "3/4", step = "1/4" }
///   [[direction]] a = [...], offsets = ...            # per-direction offsets
ScanSpec scan_spec_from_toml(std::string_view text);

nlohmann::json report_to_json(const StabilityReport& report);

/// Columns: direction, offset, L_P, int_abs_ftilde, ratio. Pair candidates
/// list both creases separated by '+'. Optionally sorted by L_P ascending.
std::string report_csv(const StabilityReport& report, bool sort_by_lp);

}  // namespace csck
