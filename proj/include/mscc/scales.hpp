#pragma once

#include <string>
#include <vector>

namespace mscc {

// Analysis scales. A scale is the DIAMETER of the neighborhood ball;
// queries use scale/2 as radius.
struct ScaleSet {
    std::vector<double> diameters; // strictly increasing, all > 0

    size_t count() const { return diameters.size(); }
    double largest() const { return diameters.back(); }

    void validate() const; // throws UsageError on violation

    bool operator==(const ScaleSet&) const = default;
};

// Accepts "min:step:max" (inclusive, e.g. "0.02:0.01:0.20" -> 19 scales)
// or an explicit comma list "0.02,0.05,0.1".
ScaleSet parse_scales(const std::string& spec);

std::string format_scales(const ScaleSet& scales); // space-separated diameters

} // namespace mscc
