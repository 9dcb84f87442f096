#ifndef CURVSTAB_IO_HPP
#define CURVSTAB_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "curvstab/classifier.hpp"
#include "curvstab/harness.hpp"

namespace curvstab {

struct RunConfig {
  std::string command;  // classify | hessian | verify | region | catalog
  std::optional<ProductSpace> product;
  std::optional<FunctionalId> functional;
  std::vector<VariationDirection> directions;
  std::vector<std::string> cases;
  std::optional<RegionGrid> grid;
  std::string output = "json";
  ClassifyOptions tolerances;
};

// Schema-checked parse; unknown or malformed fields raise ConfigError with a
// field path.
RunConfig parse_config(const nlohmann::ordered_json& j);

// Serialization (floating values printed with 17 significant digits;
// non-finite values as the strings "inf", "-inf", "nan").
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

nlohmann::ordered_json to_json(const EinsteinFactor& f);
nlohmann::ordered_json to_json(const ProductSpace& p);
nlohmann::ordered_json to_json(const FunctionalId& f);
nlohmann::ordered_json to_json(const VariationDirection& d);
nlohmann::ordered_json to_json(const QuadraticFormReport& r);
nlohmann::ordered_json to_json(const StabilityVerdict& v);
nlohmann::ordered_json to_json(const VerificationReport& r);

EinsteinFactor factor_from_json(const nlohmann::ordered_json& j, const std::string& path);
ProductSpace product_from_json(const nlohmann::ordered_json& j, const std::string& path);
FunctionalId functional_from_json(const nlohmann::ordered_json& j, const std::string& path);
VariationDirection direction_from_json(const nlohmann::ordered_json& j, const std::string& path);

struct RunFlags {
  bool strict = false;
  bool auto_rescale = false;
  std::optional<std::string> output_override;
};

// Executes the configured command, writing the serialized result to `out`.
// Returns the process exit status (0 ok, 1 refuted verification, 2 invalid
// config, 3 indeterminate-only under --strict).
int run(const RunConfig& config, const RunFlags& flags, std::ostream& out);

} // namespace curvstab

#endif
