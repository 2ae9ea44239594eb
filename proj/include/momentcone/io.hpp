#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "momentcone/certify.hpp"
#include "momentcone/quadrature.hpp"
#include "momentcone/region.hpp"
#include "momentcone/synthesis.hpp"

namespace mcone {

// ordered_json keeps insertion order, which pins the output byte layout
using json = nlohmann::ordered_json;

// Reads and parses, wrapping parse failures into InvalidInput.
json load_json_file(const std::string& path);

json index_set_to_json(const IndexSet& I);
IndexSet index_set_from_json(const json& j, int dim);

json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const json& j, int dim);

json region_to_json(const SupportRegion& T);
SupportRegion region_from_json(const json& j);

json measure_to_json(const AtomicMeasure& nu, const SupportRegion& T);

json density_to_json(const Density& d);
Density density_from_json(const json& j);

json certificate_to_json(const PositivityCertificate& cert);
json classification_to_json(const Classification& c);

// {"dim", "index_set", "moments", "support", "params"{...}}; validates a
// regular index set, g_0 = 1 and a support of positive measure.
struct ProblemFile {
  MomentVector moments;
  SupportRegion support;
  SynthesisParams params;
};
ProblemFile load_problem(const json& j);

// {"dim", "support", "atoms", optional "index_set"}
struct MeasureFile {
  AtomicMeasure measure;
  SupportRegion support;
  std::optional<IndexSet> index_set;
};
MeasureFile load_measure(const json& j);

// {"dim", "support", "components", optional "index_set"}
struct DensityFile {
  Density density;
  std::optional<IndexSet> index_set;
};
DensityFile load_density(const json& j);

SynthesisParams params_from_json(const json& j);  // flat optional keys

}  // namespace mcone
