#pragma once

// JSON and CSV forms of maps, places, configurations and experiment records.

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "dyncap/capacities.hpp"
#include "dyncap/equilab.hpp"

namespace dyncap {

using json = nlohmann::json;

/// {"num": [...], "den": [...]} (ascending affine coefficients) or
/// {"F1": [...], "F2": [...], "d": d}. Coefficients are strings or integers.
HomogeneousPair map_from_json(const json& j);
/// Always the homogeneous form.
json map_to_json(const HomogeneousPair& F);
/// "z2", "z2p1", "lattes-demo"; nullopt otherwise.
std::optional<HomogeneousPair> map_alias(const std::string& name);
/// Inline JSON, an alias, or a path to a JSON file.
HomogeneousPair parse_map_argument(const std::string& arg);

/// "arch" or {"p": 5}.
json place_to_json(const Place& v);
Place place_from_json(const json& j);

json configuration_to_json(const ConfigurationReport& r);
ConfigurationReport configuration_from_json(const json& j);

struct ExperimentRecord {
  std::string experiment;
  json params = json::object();
  json table = json::array();
};

json record_to_json(const ExperimentRecord& r);
/// InvalidInput unless experiment is a string, params an object and table an array.
ExperimentRecord record_from_json(const json& j);

ExperimentRecord bilu_record(std::size_t n, bool cyclotomic, const BiluReport& r);
ExperimentRecord pseudo_equi_record(const std::string& family, const PseudoEquiTable& t);
ExperimentRecord comparison_record(const std::string& reference, const ComparisonReport& c);
ExperimentRecord tdiam_record(const MonotonicityTrace& t);

/// Rows of the table as CSV; the header lists scalar keys in first-seen order.
void write_record_csv(std::ostream& out, const ExperimentRecord& r);

/// %.15g
std::string format_double(double x);

}  // namespace dyncap
