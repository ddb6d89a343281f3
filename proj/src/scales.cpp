#include "mscc/scales.hpp"

#include "mscc/errors.hpp"
#include "mscc/textio.hpp"

#include <cmath>
#include <sstream>

namespace mscc {

void ScaleSet::validate() const {
    if (diameters.empty()) throw UsageError("scale set is empty");
    double prev = 0;
    for (double d : diameters) {
        if (!(d > 0)) throw UsageError("scales must be positive");
        if (!(d > prev)) throw UsageError("scales must be strictly increasing");
        prev = d;
    }
}

ScaleSet parse_scales(const std::string& spec) {
    ScaleSet out;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::istringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() != 3) throw UsageError("scale range must be min:step:max, got '" + spec + "'");
        const double lo = parse_double(parts[0], "scale range");
        const double step = parse_double(parts[1], "scale range");
        const double hi = parse_double(parts[2], "scale range");
        if (!(step > 0) || !(lo > 0) || !(hi >= lo))
            throw UsageError("invalid scale range '" + spec + "'");
        const long n = std::lround((hi - lo) / step) + 1;
        for (long k = 0; k < n; ++k) out.diameters.push_back(lo + static_cast<double>(k) * step);
        // keep within the stated max despite rounding
        while (!out.diameters.empty() && out.diameters.back() > hi + 1e-12 * hi)
            out.diameters.pop_back();
    } else {
        std::istringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) out.diameters.push_back(parse_double(item, "scale list"));
        }
    }
    out.validate();
    return out;
}

std::string format_scales(const ScaleSet& scales) {
    std::string out;
    for (size_t i = 0; i < scales.diameters.size(); ++i) {
        if (i) out += ' ';
        out += format_double(scales.diameters[i]);
    }
    return out;
}

} // namespace mscc
