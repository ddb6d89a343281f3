#include "mscc/pointcloud.hpp"

#include "mscc/errors.hpp"
#include "mscc/textio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mscc {

namespace {

// Parses the first three numeric fields of a point line. Returns false for
// lines that should be skipped (blank / comment).
bool parse_point_line(const std::string& line, size_t lineno, Point3& p, std::string* fourth) {
    size_t i = 0;
    const size_t n = line.size();
    while (i < n && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= n || line[i] == '#') return false;

    double coords[3];
    for (int c = 0; c < 3; ++c) {
        while (i < n && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const size_t start = i;
        while (i < n && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i == start)
            throw DataError("line " + std::to_string(lineno) + ": expected 3 coordinates, got " +
                            std::to_string(c));
        const std::string_view tok(line.data() + start, i - start);
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), coords[c]);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            throw DataError("line " + std::to_string(lineno) + ": malformed coordinate '" +
                            std::string(tok) + "'");
        if (!std::isfinite(coords[c]))
            throw DataError("line " + std::to_string(lineno) + ": non-finite coordinate '" +
                            std::string(tok) + "'");
    }
    p = Point3(coords[0], coords[1], coords[2]);
    if (fourth) {
        while (i < n && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const size_t start = i;
        while (i < n && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        *fourth = line.substr(start, i - start);
    }
    return true;
}

PointCloud load_impl(const std::string& path, std::vector<std::string>* labels) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    PointCloud cloud;
    std::string line;
    size_t lineno = 0;
    Point3 p;
    std::string fourth;
    while (std::getline(in, line)) {
        ++lineno;
        if (!parse_point_line(line, lineno, p, labels ? &fourth : nullptr)) continue;
        cloud.points.push_back(p);
        if (labels) labels->push_back(fourth);
    }
    if (in.bad()) throw DataError("error while reading file: " + path);
    if (cloud.empty()) throw DataError("no valid points in file: " + path);
    return cloud;
}

} // namespace

PointCloud load_xyz(const std::string& path) { return load_impl(path, nullptr); }

PointCloud load_xyz_labeled(const std::string& path, std::vector<std::string>& labels) {
    labels.clear();
    return load_impl(path, &labels);
}

void save_xyz(const std::string& path, const PointCloud& cloud,
              const std::vector<std::string>& header, const std::vector<std::string>* extra) {
    std::ostringstream out;
    for (const auto& h : header) out << h << '\n';
    for (size_t i = 0; i < cloud.size(); ++i) {
        const Point3& p = cloud[i];
        out << format_double(p.x) << ' ' << format_double(p.y) << ' ' << format_double(p.z);
        if (extra) out << ' ' << (*extra)[i];
        out << '\n';
    }
    write_text_file(path, out.str());
}

} // namespace mscc
