#include "mscc/featureset_io.hpp"

#include "mscc/errors.hpp"
#include "mscc/textio.hpp"

#include <cmath>
#include <sstream>

namespace mscc {

namespace {
constexpr const char* kMagic = "mscc-featureset 1";
}

std::string featureset_to_string(const FeatureSet& fs) {
    std::ostringstream out;
    out << kMagic << '\n';
    for (const auto& c : fs.header_comments) out << c << '\n';
    out << "scales " << format_scales(fs.scales) << '\n';
    out << "count " << fs.rows.size() << '\n';
    if (!fs.source.empty()) out << "source " << fs.source << '\n';
    if (fs.d_min > 0) out << "dmin " << format_double(fs.d_min) << '\n';
    const size_t ns = fs.scales.count();
    out << "columns x y z xy[" << 2 * ns << "] n[" << ns << "] missing[" << ns
        << "] vertical_angle density usable\n";
    out << "data\n";
    for (size_t i = 0; i < fs.rows.size(); ++i) {
        const DimFeature& f = fs.rows[i];
        const Point3& c = fs.cores[i];
        out << format_double(c.x) << ' ' << format_double(c.y) << ' ' << format_double(c.z);
        for (const Vec2& xy : f.xy)
            out << ' ' << format_double(xy.x) << ' ' << format_double(xy.y);
        for (uint32_t n : f.n) out << ' ' << n;
        for (uint8_t m : f.missing) out << ' ' << static_cast<int>(m);
        out << ' ' << format_double(f.vertical_angle) << ' ' << format_double(f.density) << ' '
            << (f.usable ? 1 : 0) << '\n';
    }
    return out.str();
}

void write_featureset(const std::string& path, const FeatureSet& fs) {
    write_text_file(path, featureset_to_string(fs));
}

FeatureSet read_featureset(const std::string& path) {
    return featureset_from_string(read_text_file(path), path);
}

FeatureSet featureset_from_string(const std::string& content, const std::string& name) {
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line) || line != kMagic)
        throw DataError(name + ": not a feature set file (bad magic line)");

    FeatureSet fs;
    long count = -1;
    bool in_data = false;
    size_t row = 0;
    size_t ns = 0;
    while (std::getline(in, line)) {
        if (!in_data) {
            if (line.empty()) continue;
            if (line[0] == '#') {
                fs.header_comments.push_back(line);
                continue;
            }
            auto tokens = split_ws(line);
            if (tokens.empty()) continue;
            const std::string& key = tokens[0];
            if (key == "scales") {
                for (size_t i = 1; i < tokens.size(); ++i)
                    fs.scales.diameters.push_back(parse_double(tokens[i], name + " scales"));
                fs.scales.validate();
                ns = fs.scales.count();
            } else if (key == "count") {
                if (tokens.size() != 2) throw DataError(name + ": malformed count line");
                count = parse_long(tokens[1], name + " count");
            } else if (key == "source") {
                fs.source = line.substr(7);
            } else if (key == "dmin") {
                if (tokens.size() != 2) throw DataError(name + ": malformed dmin line");
                fs.d_min = parse_double(tokens[1], name + " dmin");
            } else if (key == "columns") {
                // informative only
            } else if (key == "data") {
                if (ns == 0) throw DataError(name + ": data section before scales");
                if (count < 0) throw DataError(name + ": data section before count");
                fs.cores.reserve(count);
                fs.rows.reserve(count);
                in_data = true;
            } else {
                throw DataError(name + ": unknown header key '" + key + "'");
            }
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        auto tokens = split_ws(line);
        const size_t expected = 3 + 2 * ns + ns + ns + 3;
        if (tokens.size() != expected)
            throw DataError(name + ": row " + std::to_string(row) + " has " +
                            std::to_string(tokens.size()) + " fields, expected " +
                            std::to_string(expected));
        size_t t = 0;
        auto next = [&]() -> const std::string& { return tokens[t++]; };
        const std::string ctx = name + " row " + std::to_string(row);
        Point3 core;
        core.x = parse_double(next(), ctx);
        core.y = parse_double(next(), ctx);
        core.z = parse_double(next(), ctx);
        DimFeature f;
        f.xy.resize(ns);
        f.n.resize(ns);
        f.missing.resize(ns);
        for (size_t k = 0; k < ns; ++k) {
            f.xy[k].x = parse_double(next(), ctx);
            f.xy[k].y = parse_double(next(), ctx);
        }
        for (size_t k = 0; k < ns; ++k)
            f.n[k] = static_cast<uint32_t>(parse_long(next(), ctx));
        for (size_t k = 0; k < ns; ++k)
            f.missing[k] = static_cast<uint8_t>(parse_long(next(), ctx));
        f.vertical_angle = parse_double(next(), ctx);
        f.density = parse_double(next(), ctx);
        f.usable = parse_long(next(), ctx) != 0;
        fs.cores.push_back(core);
        fs.rows.push_back(std::move(f));
        ++row;
    }
    if (!in_data) throw DataError(name + ": missing data section");
    if (count >= 0 && static_cast<long>(fs.rows.size()) != count)
        throw DataError(name + ": expected " + std::to_string(count) + " rows, found " +
                        std::to_string(fs.rows.size()));
    return fs;
}

} // namespace mscc
