#include "rescale/model_io.hpp"

#include "rescale/errors.hpp"

#include "json.hpp"

namespace rescale {

namespace {

using json = nlohmann::ordered_json;

json vector_json(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Vector json_vector(const json& a, const char* what) {
    if (!a.is_array()) throw InvalidInput(std::string("model: '") + what + "' must be an array");
    Vector v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number()) throw InvalidInput(std::string("model: '") + what + "' must hold numbers");
        v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    }
    return v;
}

const json& field(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw InvalidInput(std::string("model: missing field '") + key + "'");
    return *it;
}

}  // namespace

ModelDocument make_document(const FitResult& fit) {
    ModelDocument doc;
    doc.family = fit.family;
    doc.mean = fit.model.mean();
    doc.covariance = fit.model.cov().matrix();
    doc.match = fit.match;
    doc.cross_entropy = fit.cross_entropy;
    doc.dim = fit.model.dim();
    return doc;
}

std::string serialize_model(const ModelDocument& doc) {
    json family{{"kind", std::string(family_name(doc.family.kind()))}};
    if (doc.family.fixed_mean()) family["fixed_mean"] = vector_json(*doc.family.fixed_mean());

    json cov = json::array();
    for (Eigen::Index i = 0; i < doc.covariance.rows(); ++i) cov.push_back(vector_json(doc.covariance.row(i)));

    json j{
        {"schema_version", doc.schema_version},
        {"family", family},
        {"dim", doc.dim},
        {"mean", vector_json(doc.mean)},
        {"covariance", cov},
        {"match", doc.match},
        {"cross_entropy", doc.cross_entropy},
    };
    return j.dump(2) + "\n";
}

ModelDocument parse_model(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model: ") + e.what(), 1);
    }
    if (!j.is_object()) throw InvalidInput("model: top level must be an object");

    ModelDocument doc;
    const json& version = field(j, "schema_version");
    if (!version.is_string() || version.get<std::string>() != kModelSchemaVersion)
        throw InvalidInput("model: unsupported schema_version");
    doc.schema_version = version.get<std::string>();

    const json& family = field(j, "family");
    if (!family.is_object()) throw InvalidInput("model: 'family' must be an object");
    const json& kind_name = field(family, "kind");
    if (!kind_name.is_string()) throw InvalidInput("model: family kind must be a string");
    const auto kind = parse_family(kind_name.get<std::string>());
    if (!kind) throw InvalidInput("model: unknown family '" + kind_name.get<std::string>() + "'");
    std::optional<Vector> fixed;
    if (family.contains("fixed_mean")) fixed = json_vector(family["fixed_mean"], "fixed_mean");
    doc.family = FamilySpec(*kind, std::move(fixed));

    const json& dim = field(j, "dim");
    if (!dim.is_number_integer() || dim.get<long long>() < 1) throw InvalidInput("model: 'dim' must be a positive integer");
    doc.dim = static_cast<Eigen::Index>(dim.get<long long>());

    doc.mean = json_vector(field(j, "mean"), "mean");
    const json& cov = field(j, "covariance");
    if (!cov.is_array() || static_cast<Eigen::Index>(cov.size()) != doc.dim)
        throw InvalidInput("model: 'covariance' must have dim rows");
    doc.covariance.resize(doc.dim, doc.dim);
    for (Eigen::Index i = 0; i < doc.dim; ++i) {
        const Vector row = json_vector(cov[static_cast<std::size_t>(i)], "covariance");
        if (row.size() != doc.dim) throw InvalidInput("model: 'covariance' must be square");
        doc.covariance.row(i) = row.transpose();
    }
    if (doc.mean.size() != doc.dim) throw InvalidInput("model: 'mean' length differs from dim");
    if (doc.family.fixed_mean() && doc.family.fixed_mean()->size() != doc.dim)
        throw InvalidInput("model: 'fixed_mean' length differs from dim");

    const json& match = field(j, "match");
    const json& ce = field(j, "cross_entropy");
    if (!match.is_number() || !ce.is_number()) throw InvalidInput("model: 'match' and 'cross_entropy' must be numbers");
    doc.match = match.get<double>();
    doc.cross_entropy = ce.get<double>();
    return doc;
}

}  // namespace rescale
