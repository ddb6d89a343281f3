#include "mscc/classifier_svg.hpp"

#include "mscc/errors.hpp"
#include "mscc/textio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

namespace mscc {

namespace {

constexpr const char* kMetaId = "mscc-classifier";
constexpr const char* kBoundaryId = "boundary";
constexpr double kViewWidth = 880, kViewHeight = 660, kViewMargin = 60;
constexpr size_t kMaxScatter = 1500; // per class, keeps files editable

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string xml_unescape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size();) {
        if (s[i] != '&') {
            out += s[i++];
            continue;
        }
        const auto end = s.find(';', i);
        if (end == std::string::npos) {
            out += s[i++];
            continue;
        }
        const std::string ent = s.substr(i + 1, end - i - 1);
        if (ent == "amp") out += '&';
        else if (ent == "lt") out += '<';
        else if (ent == "gt") out += '>';
        else if (ent == "quot") out += '"';
        else if (ent == "apos") out += '\'';
        else out += s.substr(i, end - i + 1);
        i = end + 1;
    }
    return out;
}

struct Viewport {
    double scale = 1, ox = 0, oy = 0; // vx = ox + scale*px ; vy = oy - scale*py
};

struct Bounds {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool empty = true;
    void add(const Vec2& p) {
        if (empty) {
            xmin = xmax = p.x;
            ymin = ymax = p.y;
            empty = false;
            return;
        }
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
};

Viewport fit_viewport(const Bounds& b) {
    double dx = b.xmax - b.xmin, dy = b.ymax - b.ymin;
    if (!(dx > 0)) dx = 1;
    if (!(dy > 0)) dy = 1;
    Viewport v;
    v.scale = std::min((kViewWidth - 2 * kViewMargin) / dx, (kViewHeight - 2 * kViewMargin) / dy);
    v.ox = kViewWidth / 2 - v.scale * (b.xmin + b.xmax) / 2;
    v.oy = kViewHeight / 2 + v.scale * (b.ymin + b.ymax) / 2;
    return v;
}

std::string matrix_attr(const Viewport& v) {
    return "matrix(" + format_double(v.scale) + " 0 0 " + format_double(-v.scale) + " " +
           format_double(v.ox) + " " + format_double(v.oy) + ")";
}

void append_scatter(std::ostringstream& out, const std::vector<Vec2>& pts,
                    const std::string& group_id, const std::string& color,
                    const std::string& transform, double radius) {
    out << "  <g id=\"" << group_id << "\" transform=\"" << transform << "\" fill=\"" << color
        << "\" fill-opacity=\"0.45\" stroke=\"none\">\n";
    const size_t stride = pts.size() > kMaxScatter ? (pts.size() + kMaxScatter - 1) / kMaxScatter : 1;
    for (size_t i = 0; i < pts.size(); i += stride) {
        out << "    <circle cx=\"" << format_double(pts[i].x) << "\" cy=\""
            << format_double(pts[i].y) << "\" r=\"" << format_double(radius) << "\"/>\n";
    }
    out << "  </g>\n";
}

const std::array<std::pair<const char*, bool PlaneFlags::*>, 7> kFlagTable = {{
    {"lda_regularized", &PlaneFlags::lda_regularized},
    {"platt_capped", &PlaneFlags::platt_capped},
    {"platt_inverted", &PlaneFlags::platt_inverted},
    {"axis2_variance_fallback", &PlaneFlags::axis2_variance_fallback},
    {"rotation_skipped", &PlaneFlags::rotation_skipped},
    {"yscale_skipped", &PlaneFlags::yscale_skipped},
    {"boundary_fallback", &PlaneFlags::boundary_fallback},
}};

std::string vector_to_text(const Eigen::VectorXd& v) {
    std::string out;
    for (long i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += format_double(v[i]);
    }
    return out;
}

} // namespace

std::string classifier_to_svg(const BinaryClassifier& c, const std::vector<Vec2>& pos_points,
                              const std::vector<Vec2>& neg_points) {
    Bounds b;
    for (const Vec2& p : pos_points) b.add(p);
    for (const Vec2& p : neg_points) b.add(p);
    for (const Vec2& p : c.boundary.vertices) b.add(p);
    b.add(c.plane.center_pos);
    b.add(c.plane.center_neg);
    const Viewport vp = fit_viewport(b);
    const std::string tf = matrix_attr(vp);

    std::ostringstream meta;
    meta << "mscc-classifier 1\n";
    meta << "label_pos " << c.label_pos << '\n';
    meta << "label_neg " << c.label_neg << '\n';
    meta << "scales " << format_scales(c.scales) << '\n';
    meta << "with_vertical " << (c.with_vertical_angle ? 1 : 0) << '\n';
    meta << "w1 " << vector_to_text(c.plane.axis1.w) << '\n';
    meta << "b1 " << format_double(c.plane.axis1.b) << '\n';
    meta << "w2 " << vector_to_text(c.plane.axis2.w) << '\n';
    meta << "b2 " << format_double(c.plane.axis2.b) << '\n';
    meta << "phi " << format_double(c.plane.phi) << '\n';
    meta << "gamma " << format_double(c.plane.gamma) << '\n';
    meta << "center_pos " << format_double(c.plane.center_pos.x) << ' '
         << format_double(c.plane.center_pos.y) << '\n';
    meta << "center_neg " << format_double(c.plane.center_neg.x) << ' '
         << format_double(c.plane.center_neg.y) << '\n';
    meta << "train_ba " << format_double(c.stats.train_ba) << '\n';
    meta << "train_fdr " << format_double(c.stats.train_fdr) << '\n';
    meta << "flags";
    for (const auto& [name, member] : kFlagTable) meta << ' ' << name << '=' << (c.flags.*member ? 1 : 0);
    meta << '\n';
    meta << "transform " << format_double(vp.scale) << ' ' << format_double(vp.ox) << ' '
         << format_double(vp.oy) << '\n';
    for (const auto& line : c.provenance) meta << "prov " << line << '\n';

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kViewWidth << "\" height=\""
        << kViewHeight << "\" viewBox=\"0 0 " << kViewWidth << ' ' << kViewHeight << "\">\n";
    out << "  <desc id=\"" << kMetaId << "\">\n"
        << xml_escape(meta.str()) << "  </desc>\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << kViewWidth << "\" height=\"" << kViewHeight
        << "\" fill=\"#ffffff\"/>\n";

    const double r = 2.2 / vp.scale;
    append_scatter(out, neg_points, "class-neg", "#d73027", tf, r);
    append_scatter(out, pos_points, "class-pos", "#1a9850", tf, r);

    // axes with confidence annotations: |d| = ln(c / (1-c)) along X
    out << "  <g id=\"axes\" stroke=\"#888888\" stroke-width=\"1\" fill=\"none\">\n";
    auto vx = [&](double px) { return vp.ox + vp.scale * px; };
    auto vy = [&](double py) { return vp.oy - vp.scale * py; };
    out << "    <line x1=\"" << vx(b.xmin) << "\" y1=\"" << vy(0) << "\" x2=\"" << vx(b.xmax)
        << "\" y2=\"" << vy(0) << "\"/>\n";
    out << "    <line x1=\"" << vx(0) << "\" y1=\"" << vy(b.ymin) << "\" x2=\"" << vx(0)
        << "\" y2=\"" << vy(b.ymax) << "\"/>\n";
    for (double conf : {0.75, 0.9, 0.95, 0.99}) {
        const double d = std::log(conf / (1 - conf));
        for (double side : {-1.0, 1.0}) {
            const double px = side * d;
            if (px < b.xmin || px > b.xmax) continue;
            out << "    <line x1=\"" << vx(px) << "\" y1=\"" << vy(0) - 4 << "\" x2=\"" << vx(px)
                << "\" y2=\"" << vy(0) + 4 << "\"/>\n";
        }
    }
    out << "  </g>\n";
    out << "  <g id=\"labels\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#444444\">\n";
    for (double conf : {0.75, 0.9, 0.95, 0.99}) {
        const double d = std::log(conf / (1 - conf));
        for (double side : {-1.0, 1.0}) {
            const double px = side * d;
            if (px < b.xmin || px > b.xmax) continue;
            out << "    <text x=\"" << vx(px) - 10 << "\" y=\"" << vy(0) + 18 << "\">" << conf
                << "</text>\n";
        }
    }
    out << "    <text x=\"8\" y=\"16\">+ " << xml_escape(c.label_pos)
        << " (green, right)  - " << xml_escape(c.label_neg) << " (red, left)</text>\n";
    out << "    <text x=\"8\" y=\"32\">confidence ticks along X; Y scale factor gamma = "
        << format_double(c.plane.gamma) << "</text>\n";
    out << "  </g>\n";

    out << "  <path id=\"" << kBoundaryId << "\" transform=\"" << tf << "\" d=\"";
    for (size_t i = 0; i < c.boundary.vertices.size(); ++i) {
        const Vec2& v = c.boundary.vertices[i];
        out << (i == 0 ? "M " : " L ") << format_double(v.x) << ' ' << format_double(v.y);
    }
    out << "\" fill=\"none\" stroke=\"#2166ac\" stroke-width=\"" << format_double(2.5 / vp.scale)
        << "\"/>\n";
    out << "</svg>\n";
    return out.str();
}

void write_svg(const std::string& path, const BinaryClassifier& c,
               const std::vector<Vec2>& pos_points, const std::vector<Vec2>& neg_points) {
    write_text_file(path, classifier_to_svg(c, pos_points, neg_points));
}

void write_svg(const std::string& path, const BinaryClassifier& c, const FeatureSet& pos,
               const FeatureSet& neg) {
    auto project_all = [&](const FeatureSet& fs) {
        std::vector<Vec2> out;
        out.reserve(fs.rows.size());
        for (const auto& r : fs.rows)
            if (r.usable) out.push_back(c.project_feature(r));
        return out;
    };
    write_svg(path, c, project_all(pos), project_all(neg));
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

namespace {

struct XmlElement {
    std::string name;
    std::map<std::string, std::string> attrs;
    std::string text; // inner text up to the closing tag (captured on demand)
};

// Minimal scan for start tags; comments, declarations and unknown content
// are skipped. Good enough for files rewritten by generic SVG editors.
class XmlScanner {
public:
    explicit XmlScanner(const std::string& content, const std::string& name)
        : s_(content), name_(name) {}

    bool next(XmlElement& el) {
        while (true) {
            const size_t lt = s_.find('<', pos_);
            if (lt == std::string::npos) return false;
            pos_ = lt + 1;
            if (s_.compare(pos_, 3, "!--") == 0) {
                const size_t end = s_.find("-->", pos_);
                if (end == std::string::npos) throw DataError(name_ + ": unterminated comment");
                pos_ = end + 3;
                continue;
            }
            if (pos_ < s_.size() && (s_[pos_] == '?' || s_[pos_] == '!')) {
                pos_ = s_.find('>', pos_);
                if (pos_ == std::string::npos) return false;
                ++pos_;
                continue;
            }
            if (pos_ < s_.size() && s_[pos_] == '/') { // closing tag
                pos_ = s_.find('>', pos_);
                if (pos_ == std::string::npos) return false;
                ++pos_;
                continue;
            }
            return parse_tag(el);
        }
    }

    // captures text between the current position and the closing tag of `el`
    std::string inner_text(const std::string& tag) {
        const std::string closing = "</" + tag;
        const size_t end = s_.find(closing, pos_);
        if (end == std::string::npos)
            throw DataError(name_ + ": missing closing tag for <" + tag + ">");
        const std::string text = s_.substr(pos_, end - pos_);
        pos_ = end + closing.size();
        return text;
    }

private:
    bool parse_tag(XmlElement& el) {
        el.name.clear();
        el.attrs.clear();
        while (pos_ < s_.size() && !isspace(static_cast<unsigned char>(s_[pos_])) &&
               s_[pos_] != '>' && s_[pos_] != '/')
            el.name += s_[pos_++];
        while (pos_ < s_.size()) {
            while (pos_ < s_.size() && isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ >= s_.size()) return false;
            if (s_[pos_] == '>') {
                ++pos_;
                return true;
            }
            if (s_[pos_] == '/') { // self-closing
                pos_ = s_.find('>', pos_);
                if (pos_ == std::string::npos) return false;
                ++pos_;
                return true;
            }
            std::string key;
            while (pos_ < s_.size() && s_[pos_] != '=' && s_[pos_] != '>' &&
                   !isspace(static_cast<unsigned char>(s_[pos_])))
                key += s_[pos_++];
            while (pos_ < s_.size() && isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ >= s_.size() || s_[pos_] != '=') {
                el.attrs[key] = ""; // bare attribute
                continue;
            }
            ++pos_;
            while (pos_ < s_.size() && isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ >= s_.size()) return false;
            const char quote = s_[pos_];
            if (quote != '"' && quote != '\'')
                throw DataError(name_ + ": unquoted attribute value for '" + key + "'");
            ++pos_;
            const size_t end = s_.find(quote, pos_);
            if (end == std::string::npos)
                throw DataError(name_ + ": unterminated attribute value for '" + key + "'");
            el.attrs[key] = xml_unescape(s_.substr(pos_, end - pos_));
            pos_ = end + 1;
        }
        return false;
    }

    const std::string& s_;
    std::string name_;
    size_t pos_ = 0;
};

// affine transform: x' = a x + c y + e ; y' = b x + d y + f
struct Affine {
    double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

    Vec2 apply(const Vec2& p) const { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }

    Affine then(const Affine& o) const { // this ∘ o (apply o first)
        return {a * o.a + c * o.b,        b * o.a + d * o.b,
                a * o.c + c * o.d,        b * o.c + d * o.d,
                a * o.e + c * o.f + e,    b * o.e + d * o.f + f};
    }

    Affine inverse(const std::string& name) const {
        const double det = a * d - b * c;
        if (det == 0) throw DataError(name + ": singular transform on boundary path");
        const double ia = d / det, ib = -b / det, ic = -c / det, id = a / det;
        return {ia, ib, ic, id, -(ia * e + ic * f), -(ib * e + id * f)};
    }

    bool operator==(const Affine&) const = default;
};

std::vector<double> parse_number_list(std::string_view s, const std::string& what) {
    std::vector<double> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == ',' || s[i] == '\t' || s[i] == '\n' ||
                                s[i] == '\r'))
            ++i;
        if (i >= s.size()) break;
        size_t j = i;
        if (s[j] == '+' || s[j] == '-') ++j;
        bool seen_digit = false, seen_dot = false, seen_exp = false;
        while (j < s.size()) {
            const char ch = s[j];
            if (ch >= '0' && ch <= '9') {
                seen_digit = true;
                ++j;
            } else if (ch == '.' && !seen_dot && !seen_exp) {
                seen_dot = true;
                ++j;
            } else if ((ch == 'e' || ch == 'E') && seen_digit && !seen_exp) {
                seen_exp = true;
                ++j;
                if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
            } else {
                break;
            }
        }
        if (!seen_digit)
            throw DataError(what + ": malformed number near '" + std::string(s.substr(i, 12)) + "'");
        out.push_back(parse_double(s.substr(i, j - i), what));
        i = j;
    }
    return out;
}

Affine parse_transform_attr(const std::string& attr, const std::string& name) {
    Affine result;
    size_t i = 0;
    while (i < attr.size()) {
        while (i < attr.size() &&
               (isspace(static_cast<unsigned char>(attr[i])) || attr[i] == ',')) ++i;
        if (i >= attr.size()) break;
        size_t j = i;
        while (j < attr.size() && (isalpha(static_cast<unsigned char>(attr[j])))) ++j;
        const std::string fn = attr.substr(i, j - i);
        const size_t open = attr.find('(', j);
        const size_t close = attr.find(')', open);
        if (open == std::string::npos || close == std::string::npos)
            throw DataError(name + ": malformed transform '" + attr + "'");
        const auto v = parse_number_list(
            std::string_view(attr).substr(open + 1, close - open - 1), name + " transform");
        Affine t;
        if (fn == "matrix" && v.size() == 6) {
            t = {v[0], v[1], v[2], v[3], v[4], v[5]};
        } else if (fn == "translate" && (v.size() == 1 || v.size() == 2)) {
            t.e = v[0];
            t.f = v.size() == 2 ? v[1] : 0;
        } else if (fn == "scale" && (v.size() == 1 || v.size() == 2)) {
            t.a = v[0];
            t.d = v.size() == 2 ? v[1] : v[0];
        } else if (fn == "rotate" && (v.size() == 1 || v.size() == 3)) {
            const double ang = v[0] * 3.14159265358979323846 / 180.0;
            const double ca = std::cos(ang), sa = std::sin(ang);
            Affine rot{ca, sa, -sa, ca, 0, 0};
            if (v.size() == 3) {
                const Affine to{1, 0, 0, 1, v[1], v[2]};
                const Affine back{1, 0, 0, 1, -v[1], -v[2]};
                rot = to.then(rot).then(back);
            }
            t = rot;
        } else {
            throw DataError(name + ": unsupported transform function '" + fn + "'");
        }
        result = result.then(t);
        i = close + 1;
    }
    return result;
}

// Extracts polyline vertices from path data: anchor points only, curve
// control points are skipped, so an editor-drawn path with N anchors
// becomes an N-vertex polyline.
std::vector<Vec2> parse_path_vertices(const std::string& d, const std::string& name) {
    std::vector<Vec2> verts;
    Vec2 cur{0, 0};
    Vec2 start{0, 0};
    char cmd = 0;
    size_t i = 0;
    auto skip_sep = [&]() {
        while (i < d.size() &&
               (isspace(static_cast<unsigned char>(d[i])) || d[i] == ',')) ++i;
    };
    auto read_numbers = [&](size_t count) {
        std::vector<double> out;
        for (size_t k = 0; k < count; ++k) {
            skip_sep();
            size_t j = i;
            if (j < d.size() && (d[j] == '+' || d[j] == '-')) ++j;
            bool seen_digit = false, seen_dot = false, seen_exp = false;
            while (j < d.size()) {
                const char ch = d[j];
                if (ch >= '0' && ch <= '9') { seen_digit = true; ++j; }
                else if (ch == '.' && !seen_dot && !seen_exp) { seen_dot = true; ++j; }
                else if ((ch == 'e' || ch == 'E') && seen_digit && !seen_exp) {
                    seen_exp = true;
                    ++j;
                    if (j < d.size() && (d[j] == '+' || d[j] == '-')) ++j;
                } else break;
            }
            if (!seen_digit)
                throw DataError(name + ": malformed number in boundary path data near '" +
                                d.substr(i, 12) + "'");
            out.push_back(parse_double(std::string_view(d).substr(i, j - i),
                                       name + " boundary path"));
            i = j;
        }
        return out;
    };
    while (true) {
        skip_sep();
        if (i >= d.size()) break;
        if (isalpha(static_cast<unsigned char>(d[i]))) cmd = d[i++];
        else if (cmd == 0 || toupper(static_cast<unsigned char>(cmd)) == 'Z')
            throw DataError(name + ": boundary path data must start with a command");
        const bool rel = islower(static_cast<unsigned char>(cmd));
        switch (toupper(static_cast<unsigned char>(cmd))) {
            case 'M': {
                auto v = read_numbers(2);
                cur = rel ? Vec2{cur.x + v[0], cur.y + v[1]} : Vec2{v[0], v[1]};
                start = cur;
                verts.push_back(cur);
                cmd = rel ? 'l' : 'L'; // subsequent pairs are implicit line-tos
                break;
            }
            case 'L': {
                auto v = read_numbers(2);
                cur = rel ? Vec2{cur.x + v[0], cur.y + v[1]} : Vec2{v[0], v[1]};
                verts.push_back(cur);
                break;
            }
            case 'H': {
                auto v = read_numbers(1);
                cur.x = rel ? cur.x + v[0] : v[0];
                verts.push_back(cur);
                break;
            }
            case 'V': {
                auto v = read_numbers(1);
                cur.y = rel ? cur.y + v[0] : v[0];
                verts.push_back(cur);
                break;
            }
            case 'C': {
                auto v = read_numbers(6);
                cur = rel ? Vec2{cur.x + v[4], cur.y + v[5]} : Vec2{v[4], v[5]};
                verts.push_back(cur);
                break;
            }
            case 'S':
            case 'Q': {
                auto v = read_numbers(4);
                cur = rel ? Vec2{cur.x + v[2], cur.y + v[3]} : Vec2{v[2], v[3]};
                verts.push_back(cur);
                break;
            }
            case 'T': {
                auto v = read_numbers(2);
                cur = rel ? Vec2{cur.x + v[0], cur.y + v[1]} : Vec2{v[0], v[1]};
                verts.push_back(cur);
                break;
            }
            case 'A': {
                auto v = read_numbers(7);
                cur = rel ? Vec2{cur.x + v[5], cur.y + v[6]} : Vec2{v[5], v[6]};
                verts.push_back(cur);
                break;
            }
            case 'Z': {
                if (!verts.empty() && (cur.x != start.x || cur.y != start.y)) {
                    cur = start;
                    verts.push_back(cur);
                }
                break;
            }
            default:
                throw DataError(name + ": unsupported path command '" + std::string(1, cmd) +
                                "' in boundary path");
        }
        // a bare number after this point repeats the current command
    }
    return verts;
}

} // namespace

BinaryClassifier classifier_from_svg(const std::string& content, const std::string& name) {
    XmlScanner scanner(content, name);
    XmlElement el;
    std::string meta_text;
    bool have_meta = false;
    std::string path_d, path_transform;
    bool have_path = false;

    while (scanner.next(el)) {
        auto id = el.attrs.find("id");
        if (el.name == "desc" && id != el.attrs.end() && id->second == kMetaId) {
            meta_text = xml_unescape(scanner.inner_text("desc"));
            have_meta = true;
        } else if (el.name == "path" && id != el.attrs.end() && id->second == kBoundaryId) {
            auto dit = el.attrs.find("d");
            if (dit == el.attrs.end())
                throw DataError(name + ": boundary path has no d attribute");
            path_d = dit->second;
            auto tit = el.attrs.find("transform");
            path_transform = tit == el.attrs.end() ? "" : tit->second;
            have_path = true;
        }
    }
    if (!have_meta)
        throw DataError(name + ": missing <desc id=\"" + kMetaId + "\"> metadata element");
    if (!have_path)
        throw DataError(name + ": missing <path id=\"" + kBoundaryId + "\"> element");

    // parse the key/value metadata
    BinaryClassifier c;
    std::map<std::string, std::string> kv;
    std::istringstream meta(meta_text);
    std::string line;
    bool magic_seen = false;
    while (std::getline(meta, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        line = line.substr(start);
        if (!magic_seen) {
            if (line != "mscc-classifier 1")
                throw DataError(name + ": metadata does not start with the mscc-classifier magic");
            magic_seen = true;
            continue;
        }
        const size_t sp = line.find(' ');
        const std::string key = line.substr(0, sp);
        const std::string value = sp == std::string::npos ? "" : line.substr(sp + 1);
        if (key == "prov") c.provenance.push_back(value);
        else kv[key] = value;
    }
    if (!magic_seen) throw DataError(name + ": metadata element is empty");

    auto require = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw DataError(name + ": metadata is missing key '" + key + "'");
        return it->second;
    };
    auto num = [&](const std::string& key) { return parse_double(require(key), name + " " + key); };
    auto vec = [&](const std::string& key) {
        const auto tokens = split_ws(require(key));
        Eigen::VectorXd v(tokens.size());
        for (size_t i = 0; i < tokens.size(); ++i)
            v[i] = parse_double(tokens[i], name + " " + key);
        return v;
    };

    c.label_pos = require("label_pos");
    c.label_neg = require("label_neg");
    for (const auto& tok : split_ws(require("scales")))
        c.scales.diameters.push_back(parse_double(tok, name + " scales"));
    c.scales.validate();
    c.with_vertical_angle = parse_long(require("with_vertical"), name + " with_vertical") != 0;
    c.plane.axis1.w = vec("w1");
    c.plane.axis1.b = num("b1");
    c.plane.axis2.w = vec("w2");
    c.plane.axis2.b = num("b2");
    c.plane.phi = num("phi");
    c.plane.gamma = num("gamma");
    {
        const auto t = split_ws(require("center_pos"));
        if (t.size() != 2) throw DataError(name + ": malformed center_pos");
        c.plane.center_pos = {parse_double(t[0], name), parse_double(t[1], name)};
    }
    {
        const auto t = split_ws(require("center_neg"));
        if (t.size() != 2) throw DataError(name + ": malformed center_neg");
        c.plane.center_neg = {parse_double(t[0], name), parse_double(t[1], name)};
    }
    c.stats.train_ba = num("train_ba");
    c.stats.train_fdr = num("train_fdr");
    for (const auto& tok : split_ws(require("flags"))) {
        const size_t eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string fname = tok.substr(0, eq);
        const bool fval = tok.substr(eq + 1) == "1";
        for (const auto& [tname, member] : kFlagTable)
            if (fname == tname) c.flags.*member = fval;
    }
    if (static_cast<size_t>(c.plane.axis1.w.size()) != c.dim() ||
        static_cast<size_t>(c.plane.axis2.w.size()) != c.dim())
        throw DataError(name + ": weight vector length does not match scales");

    // declared plane->viewport transform
    const auto tft = split_ws(require("transform"));
    if (tft.size() != 3) throw DataError(name + ": malformed transform key");
    const double ts = parse_double(tft[0], name + " transform");
    const double tox = parse_double(tft[1], name + " transform");
    const double toy = parse_double(tft[2], name + " transform");
    const Affine declared{ts, 0, 0, -ts, tox, toy};

    // boundary vertices: path coordinates are plane coordinates when the
    // path still carries the declared transform (bit-exact round trip);
    // otherwise map through declared^-1 ∘ actual
    std::vector<Vec2> verts = parse_path_vertices(path_d, name);
    if (verts.size() < 2)
        throw DataError(name + ": boundary path needs at least 2 vertices");
    const Affine actual = path_transform.empty()
                              ? Affine{}
                              : parse_transform_attr(path_transform, name);
    if (!(actual == declared)) {
        const Affine to_plane = declared.inverse(name).then(actual);
        for (Vec2& v : verts) v = to_plane.apply(v);
    }
    c.boundary.vertices = std::move(verts);
    for (size_t i = 1; i < c.boundary.vertices.size(); ++i) {
        const Vec2 d = c.boundary.vertices[i] - c.boundary.vertices[i - 1];
        if (d.x == 0 && d.y == 0)
            throw DataError(name + ": boundary path has consecutive duplicate vertices");
    }
    return c;
}

BinaryClassifier read_svg(const std::string& path) {
    return classifier_from_svg(read_text_file(path), path);
}

} // namespace mscc
