#include "mscc/classifier.hpp"

#include "mscc/errors.hpp"
#include "mscc/evaluation.hpp"
#include "mscc/rng.hpp"
#include "mscc/textio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace mscc {

namespace {

Eigen::VectorXd class_mean(const SampleMatrix& m) {
    return m.colwise().mean().transpose();
}

// unbiased (n-1) covariance
Eigen::MatrixXd class_covariance(const SampleMatrix& m) {
    const Eigen::MatrixXd centered = m.rowwise() - m.colwise().mean();
    return centered.transpose() * centered / static_cast<double>(m.rows() - 1);
}

} // namespace

LdaResult train_lda(const SampleMatrix& pos, const SampleMatrix& neg) {
    if (pos.rows() < 2 || neg.rows() < 2)
        throw NumericError("train_lda: each class needs at least 2 samples");
    if (pos.cols() != neg.cols()) throw UsageError("train_lda: dimension mismatch");

    const Eigen::VectorXd mu_diff = class_mean(pos) - class_mean(neg);
    Eigen::MatrixXd S = class_covariance(pos) + class_covariance(neg);
    const double dim = static_cast<double>(S.rows());

    LdaResult out;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
    if (!lu.isInvertible()) {
        if (mu_diff.norm() == 0 && S.norm() == 0)
            throw NumericError("train_lda: all features identical in both classes");
        const double eps = 1e-8 * S.trace() / dim;
        S.diagonal().array() += (eps > 0 ? eps : 1e-12);
        out.regularized = true;
    }
    out.w = S.ldlt().solve(mu_diff);
    if (!out.w.allFinite() || out.w.norm() == 0)
        throw NumericError("train_lda: degenerate solution");
    return out;
}

PegasosResult train_svm_pegasos(const SampleMatrix& pos, const SampleMatrix& neg,
                                const PegasosParams& params) {
    if (pos.rows() < 1 || neg.rows() < 1)
        throw NumericError("train_svm_pegasos: each class needs at least 1 sample");
    if (pos.cols() != neg.cols()) throw UsageError("train_svm_pegasos: dimension mismatch");
    if (!(params.lambda > 0) || params.iterations < 1)
        throw UsageError("train_svm_pegasos: lambda must be > 0 and iterations >= 1");

    const long np = pos.rows(), nn = neg.rows(), n = np + nn;
    const long d = pos.cols();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1); // last entry is the bias weight
    const double inv_sqrt_lambda = 1.0 / std::sqrt(params.lambda);
    Rng rng(params.seed);

    // suffix averaging over the last half of the iterates: the single final
    // iterate of the stochastic subgradient walk is noisy
    Eigen::VectorXd w_sum = Eigen::VectorXd::Zero(d + 1);
    const long avg_start = params.iterations / 2 + 1;
    long avg_count = 0;

    Eigen::VectorXd x(d + 1);
    for (long t = 1; t <= params.iterations; ++t) {
        const long i = static_cast<long>(rng.index(static_cast<uint64_t>(n)));
        const double y = i < np ? 1.0 : -1.0;
        x.head(d) = i < np ? pos.row(i) : neg.row(i - np);
        x[d] = 1.0;
        const double eta = 1.0 / (params.lambda * static_cast<double>(t));
        const double margin = y * w.dot(x);
        w *= (1.0 - eta * params.lambda);
        if (margin < 1.0) w += (eta * y) * x;
        // project onto the ball of radius 1/sqrt(lambda)
        const double norm = w.norm();
        if (norm > inv_sqrt_lambda) w *= inv_sqrt_lambda / norm;
        if (t >= avg_start) {
            w_sum += w;
            ++avg_count;
        }
    }
    if (avg_count > 0) w = w_sum / static_cast<double>(avg_count);

    PegasosResult out;
    out.w = w.head(d);
    out.bias = w[d];
    return out;
}

double pegasos_objective(const SampleMatrix& pos, const SampleMatrix& neg, double lambda,
                         const Eigen::VectorXd& w, double bias) {
    double hinge = 0;
    for (long i = 0; i < pos.rows(); ++i)
        hinge += std::max(0.0, 1.0 - (pos.row(i).dot(w) + bias));
    for (long i = 0; i < neg.rows(); ++i)
        hinge += std::max(0.0, 1.0 + (neg.row(i).dot(w) + bias));
    hinge /= static_cast<double>(pos.rows() + neg.rows());
    return 0.5 * lambda * (w.squaredNorm() + bias * bias) + hinge;
}

PlattFit fit_platt(const std::vector<double>& distances, const std::vector<int>& labels) {
    if (distances.size() != labels.size() || distances.empty())
        throw UsageError("fit_platt: distances and labels must be non-empty and aligned");
    long n_pos = 0, n_neg = 0;
    for (int y : labels) (y > 0 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0)
        throw NumericError("fit_platt: both labels must be present");
    for (double v : distances)
        if (!std::isfinite(v)) throw NumericError("fit_platt: non-finite distance");

    // Newton iterations on the negative log-likelihood of
    // p(y=1|s) = 1 / (1 + exp(A s + B)) with Platt's smoothed targets.
    const size_t n = distances.size();
    const double hi_target = (static_cast<double>(n_pos) + 1.0) / (static_cast<double>(n_pos) + 2.0);
    const double lo_target = 1.0 / (static_cast<double>(n_neg) + 2.0);
    std::vector<double> t(n);
    for (size_t i = 0; i < n; ++i) t[i] = labels[i] > 0 ? hi_target : lo_target;

    auto objective = [&](double A, double B) {
        double f = 0;
        for (size_t i = 0; i < n; ++i) {
            const double fApB = distances[i] * A + B;
            if (fApB >= 0)
                f += t[i] * fApB + std::log1p(std::exp(-fApB));
            else
                f += (t[i] - 1.0) * fApB + std::log1p(std::exp(fApB));
        }
        return f;
    };

    double A = 0;
    double B = std::log((static_cast<double>(n_neg) + 1.0) / (static_cast<double>(n_pos) + 1.0));
    double fval = objective(A, B);
    constexpr double kSigma = 1e-12;
    constexpr int kMaxIter = 200;
    constexpr double kMinStep = 1e-10;
    constexpr double kGradEps = 1e-7;

    for (int it = 0; it < kMaxIter; ++it) {
        double h11 = kSigma, h22 = kSigma, h21 = 0, g1 = 0, g2 = 0;
        for (size_t i = 0; i < n; ++i) {
            const double fApB = distances[i] * A + B;
            double p, q;
            if (fApB >= 0) {
                const double e = std::exp(-fApB);
                p = e / (1.0 + e);
                q = 1.0 / (1.0 + e);
            } else {
                const double e = std::exp(fApB);
                p = 1.0 / (1.0 + e);
                q = e / (1.0 + e);
            }
            const double d2 = p * q;
            h11 += distances[i] * distances[i] * d2;
            h22 += d2;
            h21 += distances[i] * d2;
            const double d1 = t[i] - p;
            g1 += distances[i] * d1;
            g2 += d1;
        }
        if (std::abs(g1) < kGradEps && std::abs(g2) < kGradEps) break;
        const double det = h11 * h22 - h21 * h21;
        const double dA = -(h22 * g1 - h21 * g2) / det;
        const double dB = -(-h21 * g1 + h11 * g2) / det;
        const double gd = g1 * dA + g2 * dB;
        double step = 1.0;
        while (step >= kMinStep) {
            const double nA = A + step * dA, nB = B + step * dB;
            const double nf = objective(nA, nB);
            if (nf < fval + 1e-4 * step * gd) {
                A = nA;
                B = nB;
                fval = nf;
                break;
            }
            step /= 2.0;
        }
        if (step < kMinStep) break;
    }

    PlattFit out;
    out.alpha = -A;
    if (out.alpha != 0) out.bias = B / out.alpha; // -B/A
    if (out.alpha < 0) out.inverted = true;
    if (out.alpha > kPlattAlphaCap) {
        out.alpha = kPlattAlphaCap;
        out.capped = true;
    } else if (out.alpha < -kPlattAlphaCap) {
        out.alpha = -kPlattAlphaCap;
        out.capped = true;
    }
    return out;
}

namespace {

std::vector<double> scores_of(const SampleMatrix& m, const Eigen::VectorXd& w) {
    std::vector<double> s(m.rows());
    Eigen::Map<Eigen::VectorXd>(s.data(), m.rows()) = m * w;
    return s;
}

// Platt-rescale a raw direction into a calibrated axis (steepness 1).
// Inverted fits are folded into a sign flip of the direction.
PlaneAxis calibrate_axis(const Eigen::VectorXd& w_raw, const SampleMatrix& pos,
                         const SampleMatrix& neg, PlaneFlags& flags, bool* inverted_out) {
    std::vector<double> s = scores_of(pos, w_raw);
    const std::vector<double> sn = scores_of(neg, w_raw);
    s.insert(s.end(), sn.begin(), sn.end());
    std::vector<int> labels(pos.rows(), 1);
    labels.insert(labels.end(), static_cast<size_t>(neg.rows()), -1);

    PlattFit fit = fit_platt(s, labels);
    if (fit.capped) flags.platt_capped = true;
    if (inverted_out) *inverted_out = fit.inverted;

    Eigen::VectorXd w = w_raw;
    double alpha = fit.alpha;
    if (fit.inverted) {
        w = -w;
        alpha = -alpha;
    }
    PlaneAxis axis;
    axis.w = alpha * w;
    axis.b = alpha * (fit.inverted ? -fit.bias : fit.bias);
    return axis;
}

// direction of maximal variance of the pooled (deflated) samples
Eigen::VectorXd principal_direction(const SampleMatrix& pos, const SampleMatrix& neg) {
    SampleMatrix all(pos.rows() + neg.rows(), pos.cols());
    all << pos, neg;
    const Eigen::MatrixXd cov = class_covariance(all);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    return solver.eigenvectors().col(cov.rows() - 1);
}

} // namespace

SeparabilityPlane build_plane(const SampleMatrix& pos, const SampleMatrix& neg,
                              TrainMethod method, const PegasosParams& pegasos,
                              PlaneFlags& flags) {
    auto train = [&](const SampleMatrix& p, const SampleMatrix& m) -> Eigen::VectorXd {
        if (method == TrainMethod::Lda) {
            LdaResult r = train_lda(p, m);
            if (r.regularized) flags.lda_regularized = true;
            return r.w;
        }
        return train_svm_pegasos(p, m, pegasos).w;
    };

    SeparabilityPlane plane;
    const Eigen::VectorXd w1_raw = train(pos, neg);
    bool inverted1 = false;
    plane.axis1 = calibrate_axis(w1_raw, pos, neg, flags, &inverted1);
    if (inverted1) flags.platt_inverted = true;

    // deflate onto the orthogonal complement of the first direction
    const Eigen::VectorXd u1 = w1_raw.normalized();
    SampleMatrix pos_d = pos - (pos * u1) * u1.transpose();
    SampleMatrix neg_d = neg - (neg * u1) * u1.transpose();

    Eigen::VectorXd w2_raw;
    bool degenerate = false;
    try {
        w2_raw = train(pos_d, neg_d);
        w2_raw -= w2_raw.dot(u1) * u1;
        if (!w2_raw.allFinite() || w2_raw.norm() < 1e-12 * w1_raw.norm()) degenerate = true;
    } catch (const NumericError&) {
        degenerate = true;
    }
    if (degenerate) {
        flags.axis2_variance_fallback = true;
        w2_raw = principal_direction(pos_d, neg_d);
        w2_raw -= w2_raw.dot(u1) * u1;
        if (w2_raw.norm() == 0) {
            // the data carries no second direction at all; pick any unit
            // vector orthogonal to u1 so the plane stays well-formed
            w2_raw = Eigen::VectorXd::Zero(u1.size());
            int k = 0;
            u1.cwiseAbs().minCoeff(&k);
            w2_raw[k] = 1.0;
            w2_raw -= w2_raw.dot(u1) * u1;
        }
    }
    try {
        plane.axis2 = calibrate_axis(w2_raw, pos, neg, flags, nullptr);
    } catch (const NumericError&) {
        flags.axis2_variance_fallback = true;
        plane.axis2.w = w2_raw.normalized();
        plane.axis2.b = 0.5 * (class_mean(pos) + class_mean(neg)).dot(plane.axis2.w);
    }

    // class centers in the (un-normalized) plane
    Vec2 cp{0, 0}, cn{0, 0};
    for (long i = 0; i < pos.rows(); ++i) {
        const Vec2 v = plane.project(pos.row(i).transpose());
        cp = cp + v;
    }
    for (long i = 0; i < neg.rows(); ++i) {
        const Vec2 v = plane.project(neg.row(i).transpose());
        cn = cn + v;
    }
    plane.center_pos = cp * (1.0 / static_cast<double>(pos.rows()));
    plane.center_neg = cn * (1.0 / static_cast<double>(neg.rows()));
    return plane;
}

void normalize_plane(SeparabilityPlane& plane, const SampleMatrix& pos, const SampleMatrix& neg,
                     PlaneFlags& flags) {
    plane.phi = 0;
    plane.gamma = 1;
    std::vector<Vec2> pp(pos.rows()), pn(neg.rows());
    Vec2 cp{0, 0}, cn{0, 0};
    for (long i = 0; i < pos.rows(); ++i) {
        pp[i] = plane.project(pos.row(i).transpose());
        cp = cp + pp[i];
    }
    for (long i = 0; i < neg.rows(); ++i) {
        pn[i] = plane.project(neg.row(i).transpose());
        cn = cn + pn[i];
    }
    cp = cp * (1.0 / static_cast<double>(pos.rows()));
    cn = cn * (1.0 / static_cast<double>(neg.rows()));

    const Vec2 delta = cp - cn;
    if (delta.norm() < 1e-300) {
        flags.rotation_skipped = true;
    } else {
        plane.phi = std::atan2(delta.y, delta.x);
    }

    // variances along the rotated axes, averaged over the two classes
    const double c = std::cos(plane.phi), s = std::sin(plane.phi);
    auto rotated = [&](const Vec2& v) -> Vec2 {
        return {c * v.x + s * v.y, -s * v.x + c * v.y};
    };
    auto accumulate = [&](const std::vector<Vec2>& pts, const Vec2& center, double& vx,
                          double& vy) {
        const Vec2 rc = rotated(center);
        double sx = 0, sy = 0;
        for (const Vec2& p : pts) {
            const Vec2 r = rotated(p);
            sx += (r.x - rc.x) * (r.x - rc.x);
            sy += (r.y - rc.y) * (r.y - rc.y);
        }
        const double denom = static_cast<double>(pts.size()) - 1.0;
        vx = denom > 0 ? sx / denom : 0;
        vy = denom > 0 ? sy / denom : 0;
    };
    double vxp, vyp, vxn, vyn;
    accumulate(pp, cp, vxp, vyp);
    accumulate(pn, cn, vxn, vyn);
    const double mean_vx = 0.5 * (vxp + vxn);
    const double mean_vy = 0.5 * (vyp + vyn);
    if (mean_vy > 0 && mean_vx > 0) {
        plane.gamma = std::sqrt(mean_vx / mean_vy);
    } else {
        flags.yscale_skipped = true;
    }

    const Vec2 rcp = rotated(cp), rcn = rotated(cn);
    plane.center_pos = {rcp.x, plane.gamma * rcp.y};
    plane.center_neg = {rcn.x, plane.gamma * rcn.y};
}

double signed_distance(const DecisionBoundary& b, const Vec2& p) {
    const size_t nseg = b.vertices.size() - 1;
    double best_d2 = std::numeric_limits<double>::infinity();
    double best_sign = 1.0;
    for (size_t i = 0; i < nseg; ++i) {
        const Vec2 a = b.vertices[i];
        const Vec2 dir = b.vertices[i + 1] - a;
        const double len2 = dir.dot(dir);
        const Vec2 pa = p - a;
        double t = len2 > 0 ? pa.dot(dir) / len2 : 0;
        t = std::clamp(t, 0.0, 1.0);
        const Vec2 closest = a + dir * t;
        const Vec2 diff = p - closest;
        const double d2 = diff.dot(diff);
        if (d2 < best_d2) {
            best_d2 = d2;
            // cross((1,0),(0,1)) = +1: points right of the travel direction
            // get positive sign, i.e. class +
            const double cr = pa.cross(dir);
            best_sign = cr >= 0 ? 1.0 : -1.0;
        }
    }
    return best_sign * std::sqrt(best_d2);
}

namespace {

// half-length giving straight boundaries a generous span beyond the data
double boundary_half_length(const std::vector<Vec2>& pos, const std::vector<Vec2>& neg,
                            const std::vector<Vec2>* unlabeled, const Vec2& mid) {
    double max_r = 1.0;
    auto visit = [&](const std::vector<Vec2>& pts) {
        for (const Vec2& p : pts) max_r = std::max(max_r, (p - mid).norm());
    };
    visit(pos);
    visit(neg);
    if (unlabeled) visit(*unlabeled);
    return 4.0 * max_r;
}

} // namespace

DecisionBoundary default_boundary(const SeparabilityPlane& plane, const std::vector<Vec2>& pos,
                                  const std::vector<Vec2>& neg,
                                  const std::vector<Vec2>* unlabeled,
                                  const BoundarySearchParams& params, PlaneFlags& flags) {
    const Vec2 cp = plane.center_pos, cn = plane.center_neg;
    const Vec2 delta = cp - cn;
    Vec2 dhat = delta;
    const double dn = delta.norm();
    if (dn > 0) dhat = dhat * (1.0 / dn);
    else dhat = {1, 0};
    // boundary direction with class + on its right
    const Vec2 g{-dhat.y, dhat.x};
    const Vec2 mid = (cp + cn) * 0.5;
    const double half = boundary_half_length(pos, neg, unlabeled, mid);

    auto straight = [&](const Vec2& origin, const Vec2& dir) {
        DecisionBoundary b;
        b.vertices = {origin - dir * half, origin + dir * half};
        return b;
    };

    if (!unlabeled || unlabeled->empty()) return straight(mid, g);

    // collect every projected point once; signed offsets are taken against
    // a rotating direction u
    std::vector<Vec2> all;
    all.reserve(pos.size() + neg.size() + unlabeled->size());
    all.insert(all.end(), pos.begin(), pos.end());
    all.insert(all.end(), neg.begin(), neg.end());
    all.insert(all.end(), unlabeled->begin(), unlabeled->end());
    const double n_all = static_cast<double>(all.size());

    double best_density = std::numeric_limits<double>::infinity();
    double best_margin = -std::numeric_limits<double>::infinity();
    bool found = false;
    Vec2 best_origin, best_dir;

    std::vector<double> proj_all(all.size()), proj_pos(pos.size()), proj_neg(neg.size());
    const long n_angles =
        2 * std::lround(params.angle_range_deg / params.angle_step_deg) + 1;

    for (long ai = 0; ai < n_angles; ++ai) {
        const double theta = (-params.angle_range_deg +
                              static_cast<double>(ai) * params.angle_step_deg) *
                             std::numbers::pi / 180.0;
        const double ct = std::cos(theta), st = std::sin(theta);
        const Vec2 u{ct * g.x - st * g.y, st * g.x + ct * g.y};

        // signed distance of p to the line through O with direction u is
        // cross(p - O, u); precompute cross(p, u)
        for (size_t i = 0; i < all.size(); ++i) proj_all[i] = all[i].cross(u);
        for (size_t i = 0; i < pos.size(); ++i) proj_pos[i] = pos[i].cross(u);
        for (size_t i = 0; i < neg.size(); ++i) proj_neg[i] = neg[i].cross(u);

        // Scott's rule bandwidth over all projected points
        double mean = 0;
        for (double v : proj_all) mean += v;
        mean /= n_all;
        double var = 0;
        for (double v : proj_all) var += (v - mean) * (v - mean);
        var /= std::max(1.0, n_all - 1.0);
        double h = std::sqrt(var) * std::pow(n_all, -0.2);
        if (!(h > 0)) h = 1e-12;

        std::vector<double> sorted = proj_all;
        std::sort(sorted.begin(), sorted.end());
        std::vector<double> sorted_pos = proj_pos, sorted_neg = proj_neg;
        std::sort(sorted_pos.begin(), sorted_pos.end());
        std::sort(sorted_neg.begin(), sorted_neg.end());
        double mean_pos = 0, mean_neg = 0;
        for (double v : proj_pos) mean_pos += v;
        mean_pos /= std::max<double>(1, proj_pos.size());
        for (double v : proj_neg) mean_neg += v;
        mean_neg /= std::max<double>(1, proj_neg.size());

        for (int oi = 0; oi < params.offset_steps; ++oi) {
            const double t = params.offset_steps > 1
                                 ? static_cast<double>(oi) / (params.offset_steps - 1.0)
                                 : 0.5;
            const Vec2 origin = cn + delta * t;
            const double c0 = origin.cross(u);

            // labeled-side constraint; points exactly on the line count as
            // misplaced for both classes
            const double n_pos_right = static_cast<double>(
                sorted_pos.end() - std::upper_bound(sorted_pos.begin(), sorted_pos.end(), c0));
            const double n_neg_left = static_cast<double>(
                std::lower_bound(sorted_neg.begin(), sorted_neg.end(), c0) - sorted_neg.begin());
            if (n_pos_right < params.side_fraction * static_cast<double>(pos.size()) ||
                n_neg_left < params.side_fraction * static_cast<double>(neg.size()))
                continue;

            // Gaussian KDE at the line, kernel truncated at 6 bandwidths
            const double lo = c0 - 6.0 * h, hi = c0 + 6.0 * h;
            auto it_lo = std::lower_bound(sorted.begin(), sorted.end(), lo);
            auto it_hi = std::upper_bound(sorted.begin(), sorted.end(), hi);
            double density = 0;
            for (auto it = it_lo; it != it_hi; ++it) {
                const double z = (*it - c0) / h;
                density += std::exp(-0.5 * z * z);
            }
            density /= n_all * h * std::sqrt(2.0 * std::numbers::pi);

            const double margin = (mean_pos - c0) - (mean_neg - c0); // offset cancels
            if (density < best_density ||
                (density == best_density && margin > best_margin)) {
                best_density = density;
                best_margin = margin;
                best_origin = origin;
                best_dir = u;
                found = true;
            }
        }
    }

    if (!found) {
        flags.boundary_fallback = true;
        return straight(mid, g);
    }
    return straight(best_origin, best_dir);
}

Vec2 BinaryClassifier::project_feature(const DimFeature& f) const {
    const std::vector<double> v = feature_vector(f, with_vertical_angle);
    if (v.size() != dim())
        throw DataError("feature dimension " + std::to_string(v.size()) +
                        " does not match classifier dimension " + std::to_string(dim()));
    return plane.project(Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
}

Classification BinaryClassifier::classify(const DimFeature& f) const {
    Classification out;
    if (!f.usable) {
        out.unclassified = true;
        return out;
    }
    const Vec2 p = project_feature(f);
    const double d = signed_distance(boundary, p);
    out.distance = d;
    out.label = d >= 0 ? 1 : -1;
    out.confidence = 1.0 / (1.0 + std::exp(-std::abs(d)));
    return out;
}

void BinaryClassifier::check_compatible(const FeatureSet& fs) const {
    if (!(scales == fs.scales))
        throw DataError("scale list mismatch: classifier expects [" + format_scales(scales) +
                        "], feature set has [" + format_scales(fs.scales) + "]");
}

SampleMatrix to_samples(const FeatureSet& fs, bool with_vertical_angle) {
    size_t usable = 0;
    for (const auto& r : fs.rows)
        if (r.usable) ++usable;
    const size_t d = 2 * fs.scales.count() + (with_vertical_angle ? 1 : 0);
    SampleMatrix m(usable, d);
    size_t row = 0;
    for (const auto& r : fs.rows) {
        if (!r.usable) continue;
        const std::vector<double> v = feature_vector(r, with_vertical_angle);
        m.row(row++) = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    }
    return m;
}

BinaryClassifier train_binary_classifier(const FeatureSet& pos, const FeatureSet& neg,
                                         const FeatureSet* unlabeled, const TrainOptions& opt) {
    if (!(pos.scales == neg.scales))
        throw DataError("scale list mismatch between the two training feature sets");
    if (unlabeled && !(unlabeled->scales == pos.scales))
        throw DataError("scale list mismatch between training and unlabeled feature sets");

    BinaryClassifier clf;
    clf.scales = pos.scales;
    clf.with_vertical_angle = opt.with_vertical_angle;
    clf.label_pos = opt.label_pos;
    clf.label_neg = opt.label_neg;

    const SampleMatrix mp = to_samples(pos, opt.with_vertical_angle);
    const SampleMatrix mn = to_samples(neg, opt.with_vertical_angle);
    if (mp.rows() < 2 || mn.rows() < 2)
        throw DataError("each training class needs at least 2 usable features");

    clf.plane = build_plane(mp, mn, opt.method, opt.pegasos, clf.flags);
    normalize_plane(clf.plane, mp, mn, clf.flags);

    std::vector<Vec2> pp(mp.rows()), pn(mn.rows());
    for (long i = 0; i < mp.rows(); ++i) pp[i] = clf.plane.project(mp.row(i).transpose());
    for (long i = 0; i < mn.rows(); ++i) pn[i] = clf.plane.project(mn.row(i).transpose());

    std::vector<Vec2> pu;
    if (unlabeled) {
        const SampleMatrix mu = to_samples(*unlabeled, opt.with_vertical_angle);
        pu.resize(mu.rows());
        for (long i = 0; i < mu.rows(); ++i) pu[i] = clf.plane.project(mu.row(i).transpose());
    }

    clf.boundary = default_boundary(clf.plane, pp, pn, unlabeled ? &pu : nullptr, opt.boundary,
                                    clf.flags);

    // training stats through the final classification path
    ConfusionCounts counts;
    std::vector<double> d_pos, d_neg;
    for (const auto& r : pos.rows) {
        if (!r.usable) continue;
        const Classification c = clf.classify(r);
        d_pos.push_back(c.distance);
        (c.label > 0 ? counts.tv : counts.fg)++;
    }
    for (const auto& r : neg.rows) {
        if (!r.usable) continue;
        const Classification c = clf.classify(r);
        d_neg.push_back(c.distance);
        (c.label < 0 ? counts.tg : counts.fv)++;
    }
    clf.stats.train_ba = balanced_accuracy(counts);
    clf.stats.train_fdr = fisher_discriminant_ratio(d_pos, d_neg);
    return clf;
}

std::string training_report(const BinaryClassifier& c) {
    std::ostringstream out;
    out << "classes: +" << c.label_pos << " / -" << c.label_neg << '\n';
    out << "scales: " << format_scales(c.scales) << '\n';
    out << "vertical angle input: " << (c.with_vertical_angle ? "yes" : "no") << '\n';
    out << "training ba: " << format_double(c.stats.train_ba) << '\n';
    out << "training fdr: " << format_double(c.stats.train_fdr) << '\n';
    const PlaneFlags& f = c.flags;
    out << "flags:";
    if (f.lda_regularized) out << " lda_regularized";
    if (f.platt_capped) out << " platt_capped";
    if (f.platt_inverted) out << " platt_inverted";
    if (f.axis2_variance_fallback) out << " axis2_variance_fallback";
    if (f.rotation_skipped) out << " rotation_skipped";
    if (f.yscale_skipped) out << " yscale_skipped";
    if (f.boundary_fallback) out << " boundary_fallback";
    if (!f.lda_regularized && !f.platt_capped && !f.platt_inverted &&
        !f.axis2_variance_fallback && !f.rotation_skipped && !f.yscale_skipped &&
        !f.boundary_fallback)
        out << " none";
    out << '\n';
    return out.str();
}

} // namespace mscc
