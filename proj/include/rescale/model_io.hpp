#pragma once

#include "rescale/families.hpp"

#include <string>
#include <string_view>

namespace rescale {

inline constexpr std::string_view kModelSchemaVersion = "1";

/// JSON form of a fitted model:
///   {"schema_version": "1", "family": {"kind": "...", "fixed_mean": [...]?},
///    "dim": N, "mean": [...], "covariance": [[...], ...],
///    "match": M, "cross_entropy": H}
/// Numbers are written in shortest round-trip form, so reading back is exact.
struct ModelDocument {
    std::string schema_version{kModelSchemaVersion};
    FamilySpec family{FamilyKind::Full};
    Vector mean;
    Matrix covariance;
    double match = 0.0;
    double cross_entropy = 0.0;
    Eigen::Index dim = 0;

    [[nodiscard]] GaussianModel model() const { return GaussianModel(mean, SymMatrix(covariance)); }
};

ModelDocument make_document(const FitResult& fit);

std::string serialize_model(const ModelDocument& doc);

/// Throws ParseError for malformed JSON and InvalidInput for schema violations.
ModelDocument parse_model(std::string_view text);

}  // namespace rescale
