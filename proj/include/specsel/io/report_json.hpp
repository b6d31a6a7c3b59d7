#pragma once

// JSON payloads shared by the HTTP service and the CLI, so both emit the same
// documents for the same results.

#include <json.hpp>

#include "specsel/regress/cv.hpp"
#include "specsel/select/compare.hpp"
#include "specsel/select/ranking.hpp"
#include "specsel/select/wavelengths.hpp"
#include "specsel/spectra/index_registry.hpp"
#include "specsel/stats/correlation.hpp"
#include "specsel/stats/hcluster.hpp"
#include "specsel/stats/histogram.hpp"
#include "specsel/stats/kde.hpp"

namespace specsel {

using json = nlohmann::json;

void to_json(json& j, const SvrHyperParams& p);
void from_json(const json& j, SvrHyperParams& p);
void to_json(json& j, const Metrics& m);  // NaN r2 becomes null
void from_json(const json& j, Metrics& m);
void to_json(json& j, const FoldPlan& p);
void from_json(const json& j, FoldPlan& p);
void to_json(json& j, const FoldResult& f);
void from_json(const json& j, FoldResult& f);
void to_json(json& j, const RegressionReport& r);
void from_json(const json& j, RegressionReport& r);
void to_json(json& j, const FeatureRanking& r);
void from_json(const json& j, FeatureRanking& r);
void to_json(json& j, const ComparisonRow& c);
void from_json(const json& j, ComparisonRow& c);
void to_json(json& j, const FeatureSet& s);
void from_json(const json& j, FeatureSet& s);
void to_json(json& j, const CorrelationMatrix& m);
void to_json(json& j, const Dendrogram& d);
void to_json(json& j, const Histogram& h);
void to_json(json& j, const DensityEstimate& e);
void to_json(json& j, const WavelengthHistogram& h);
void to_json(json& j, const BandGrid& g);

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);
std::string_view to_string(RfeCriterion criterion);  // "gradient" or "dual"
RfeCriterion parse_rfe_criterion(std::string_view text);

/// Serialized form of `bound` registry entries: name, formula, wavelengths and
/// the grid band each wavelength resolved to.
json registry_json(const IndexRegistry& registry, const BandGrid& grid);

/// Canonical text of a document; used wherever byte-identical output matters.
std::string dump(const json& j);

}  // namespace specsel
