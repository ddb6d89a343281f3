#pragma once

#include "mscc/geometry.hpp"
#include "mscc/msdim.hpp"
#include "mscc/scales.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace mscc {

// ---------------------------------------------------------------------------
// training primitives
// ---------------------------------------------------------------------------

// Rows are samples. `pos` is the +1 class, `neg` the -1 class.
using SampleMatrix = Eigen::MatrixXd;

struct LdaResult {
    Eigen::VectorXd w;
    bool regularized = false; // ridge eps*I was needed on the pooled covariance sum
};

// w = (Sigma_neg + Sigma_pos)^-1 (mu_pos - mu_neg), class covariances with
// the unbiased (n-1) convention. A singular covariance sum gets a ridge of
// 1e-8 * trace / dim.
LdaResult train_lda(const SampleMatrix& pos, const SampleMatrix& neg);

struct PegasosParams {
    double lambda = 1e-4;
    long iterations = 100000;
    uint64_t seed = 9157;
};

struct PegasosResult {
    Eigen::VectorXd w;
    double bias = 0;
};

// Primal stochastic subgradient SVM on hinge loss, constant component
// appended for the bias. Deterministic for a fixed seed.
PegasosResult train_svm_pegasos(const SampleMatrix& pos, const SampleMatrix& neg,
                                const PegasosParams& params);

// regularized hinge objective lambda/2 ||w||^2 + mean hinge, on augmented w
double pegasos_objective(const SampleMatrix& pos, const SampleMatrix& neg, double lambda,
                         const Eigen::VectorXd& w, double bias);

struct PlattFit {
    double alpha = 0; // logistic steepness: p(d) = 1 / (1 + exp(-alpha (d - bias)))
    double bias = 0;
    bool capped = false;   // alpha hit the separable-data cap
    bool inverted = false; // classes ordered backwards along d (alpha came out < 0)
};

inline constexpr double kPlattAlphaCap = 1e3;

// Maximum-likelihood logistic fit on signed scores, Platt's regularized
// targets, Newton iterations with backtracking.
PlattFit fit_platt(const std::vector<double>& distances, const std::vector<int>& labels);

// ---------------------------------------------------------------------------
// plane of maximal separability
// ---------------------------------------------------------------------------

enum class TrainMethod { Lda, Svm };

struct PlaneAxis {
    Eigen::VectorXd w; // Platt-rescaled: coordinate = w.x - b has steepness 1
    double b = 0;
};

struct PlaneFlags {
    bool lda_regularized = false;
    bool platt_capped = false;
    bool platt_inverted = false;
    bool axis2_variance_fallback = false; // second training degenerate
    bool rotation_skipped = false;        // coincident class centers
    bool yscale_skipped = false;          // zero variance along Y
    bool boundary_fallback = false;       // semi-supervised constraint infeasible
};

// Two calibrated orthogonal directions; phi/gamma hold the display
// normalization (rotation aligning class centers on X, then Y scaled so the
// classes have the same average variance in both directions).
struct SeparabilityPlane {
    PlaneAxis axis1, axis2;
    double phi = 0;
    double gamma = 1;
    Vec2 center_pos, center_neg; // class centers in output coordinates

    Vec2 project(const Eigen::VectorXd& x) const {
        const Vec2 raw{axis1.w.dot(x) - axis1.b, axis2.w.dot(x) - axis2.b};
        const double c = std::cos(phi), s = std::sin(phi);
        return {c * raw.x + s * raw.y, gamma * (-s * raw.x + c * raw.y)};
    }
};

// Trains the first direction, deflates, trains the orthogonal second
// direction, and rescales each axis so its logistic steepness is 1.
// The plane is returned un-normalized (phi = 0, gamma = 1).
SeparabilityPlane build_plane(const SampleMatrix& pos, const SampleMatrix& neg,
                              TrainMethod method, const PegasosParams& pegasos,
                              PlaneFlags& flags);

// Fills phi/gamma and recomputes the stored class centers.
void normalize_plane(SeparabilityPlane& plane, const SampleMatrix& pos,
                     const SampleMatrix& neg, PlaneFlags& flags);

// ---------------------------------------------------------------------------
// decision boundary
// ---------------------------------------------------------------------------

// Directed polyline in plane coordinates; class + lies on the right of the
// direction of travel.
struct DecisionBoundary {
    std::vector<Vec2> vertices;
};

// distance to the nearest segment, signed by the side of that segment
double signed_distance(const DecisionBoundary& b, const Vec2& p);

struct BoundarySearchParams {
    double angle_range_deg = 60; // search [-range, +range]
    double angle_step_deg = 1;
    int offset_steps = 200;
    double side_fraction = 0.95; // labeled-side constraint
};

// Without unlabeled points: the line through the midpoint of the class
// centers, perpendicular to the center-to-center direction (the equal
// probability split). With unlabeled points: the line minimizing the
// Gaussian-KDE density of all projected points, subject to keeping at least
// side_fraction of each labeled class on its own side; ties prefer larger
// separation of the labeled class means.
DecisionBoundary default_boundary(const SeparabilityPlane& plane,
                                  const std::vector<Vec2>& pos, const std::vector<Vec2>& neg,
                                  const std::vector<Vec2>* unlabeled,
                                  const BoundarySearchParams& params, PlaneFlags& flags);

// ---------------------------------------------------------------------------
// assembled binary classifier
// ---------------------------------------------------------------------------

struct ClassifierStats {
    double train_ba = 0;
    double train_fdr = 0;
};

struct Classification {
    int label = 0;           // +1 / -1, 0 when unclassified
    double confidence = 0.5; // in [0.5, 1)
    double distance = 0;     // signed distance to the boundary
    bool unclassified = false;
};

struct BinaryClassifier {
    ScaleSet scales;
    bool with_vertical_angle = false;
    SeparabilityPlane plane;
    DecisionBoundary boundary;
    std::string label_pos = "+1";
    std::string label_neg = "-1";
    ClassifierStats stats;
    PlaneFlags flags;
    std::vector<std::string> provenance; // echoed into the classifier file

    size_t dim() const { return 2 * scales.count() + (with_vertical_angle ? 1 : 0); }

    Vec2 project_feature(const DimFeature& f) const;
    Classification classify(const DimFeature& f) const;

    // exact scale-list match required before applying to a feature set
    void check_compatible(const FeatureSet& fs) const;
};

struct TrainOptions {
    TrainMethod method = TrainMethod::Lda;
    PegasosParams pegasos;
    BoundarySearchParams boundary;
    bool with_vertical_angle = false;
    std::string label_pos = "class+";
    std::string label_neg = "class-";
};

BinaryClassifier train_binary_classifier(const FeatureSet& pos, const FeatureSet& neg,
                                         const FeatureSet* unlabeled, const TrainOptions& opt);

// usable rows flattened to sample vectors
SampleMatrix to_samples(const FeatureSet& fs, bool with_vertical_angle);

std::string training_report(const BinaryClassifier& c);

} // namespace mscc
