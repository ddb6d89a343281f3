#pragma once

#include "mscc/classifier.hpp"

#include <string>
#include <vector>

namespace mscc {

// Classifier persistence as an editable SVG. The file renders the two
// training classes in the separability plane with confidence-annotated
// axes, and carries:
//
//   - a <desc id="mscc-classifier"> element holding every numeric parameter
//     as plain "key value" text (shortest round-trip decimals), and
//   - a <path id="boundary"> whose d data IS the decision boundary, written
//     in plane coordinates; the path's transform attribute maps it into the
//     viewport, and the same transform is declared under the "transform"
//     metadata key so vertices survive editors that flatten transforms.
//
// Only standard SVG elements and attributes are used; any generic editor
// can move, add or delete boundary vertices. Parsing ignores everything
// except the two reserved-ids above.
//
// write -> read -> write is byte-identical, and a parsed classifier
// reproduces labels and confidences of the in-memory one bit-exactly.

std::string classifier_to_svg(const BinaryClassifier& c, const std::vector<Vec2>& pos_points,
                              const std::vector<Vec2>& neg_points);

void write_svg(const std::string& path, const BinaryClassifier& c,
               const std::vector<Vec2>& pos_points, const std::vector<Vec2>& neg_points);

// convenience: projects the feature sets with the classifier's plane
void write_svg(const std::string& path, const BinaryClassifier& c, const FeatureSet& pos,
               const FeatureSet& neg);

BinaryClassifier classifier_from_svg(const std::string& content, const std::string& name);
BinaryClassifier read_svg(const std::string& path);

} // namespace mscc
