#pragma once

#include "mscc/msdim.hpp"

#include <string>

namespace mscc {

// Self-describing text container, one row per core point:
//
//   mscc-featureset 1
//   # <provenance comments>
//   scales <s_1> ... <s_Ns>
//   count <rows>
//   source <free text>            (optional)
//   dmin <d>                      (optional)
//   columns x y z xy[2*Ns] n[Ns] missing[Ns] vertical_angle density usable
//   data
//   <rows of whitespace-separated values>
//
// Numbers use shortest round-trip decimals, so parsing and re-writing a
// file is byte-identical.
void write_featureset(const std::string& path, const FeatureSet& fs);
std::string featureset_to_string(const FeatureSet& fs);

FeatureSet read_featureset(const std::string& path);
FeatureSet featureset_from_string(const std::string& content, const std::string& name);

} // namespace mscc
