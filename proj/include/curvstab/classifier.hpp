#ifndef CURVSTAB_CLASSIFIER_HPP
#define CURVSTAB_CLASSIFIER_HPP

#include <string>
#include <vector>

#include "curvstab/spectral.hpp"
#include "curvstab/types.hpp"

namespace curvstab {

enum class Status { Stable, Unstable, Marginal, NotCritical, Indeterminate };
std::string to_string(Status s);

struct Witness {
  VariationDirection direction;
  double value = 0.0;
  std::string description;
};

struct StabilityVerdict {
  Status status = Status::Indeterminate;
  std::vector<Witness> witnesses;       // violating or saturating directions
  std::vector<std::string> assumptions; // consumed facts, with provenance
  std::optional<double> margin;         // least quadratic-form value found
};

struct ClassifyOptions {
  double criticality_tol = 1e-9;
  double marginal_band = 1e-12;  // relative band around thresholds
  bool auto_rescale = false;     // rescale factor 1 to balance |lambda|
};

// Single-factor stability for the Ricci functional: known kinds by the
// case table, hyperbolic quotients by the first-eigenvalue criterion.
TriState factor_ric_stability(const EinsteinFactor& factor);

// Warped-product (factor-scaling) stability of the Ricci functional for a
// two-factor product.
StabilityVerdict classify_warped(const ProductSpace& product, const ClassifyOptions& opts = {});

// Theorem-level verdict for the given functional.
StabilityVerdict classify(const FunctionalId& functional, const ProductSpace& product,
                          const ClassifyOptions& opts = {});

// Parameter-region scan.
struct RegionGrid {
  std::string family = "sphere_hyperbolic";  // or "ft_opposite"
  std::vector<int> n0;                       // sphere (or positive-factor) dims
  std::vector<int> n1;                       // hyperbolic dims (sphere_hyperbolic)
  std::vector<double> mu_over_lambda;        // hyperbolic first eigenvalue / |lambda|
  std::vector<double> mu0_over_lambda;       // optional, positive factor (ft_opposite)
  std::vector<double> t;                     // ft_opposite only
};

struct RegionRow {
  std::vector<std::pair<std::string, double>> params;
  std::string status;
};

std::vector<RegionRow> region_scan(const FunctionalId& functional, const RegionGrid& grid,
                                   const ClassifyOptions& opts = {});

// Catalog of example families with machine-checkable sample points.
struct CatalogEntry {
  std::string name;
  std::string predicate;
  FunctionalId functional;
  Status expected;
  std::vector<ProductSpace> samples;
};

std::vector<CatalogEntry> catalog();

} // namespace curvstab

#endif
