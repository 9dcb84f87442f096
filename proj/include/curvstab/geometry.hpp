#ifndef CURVSTAB_GEOMETRY_HPP
#define CURVSTAB_GEOMETRY_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "curvstab/jet.hpp"
#include "curvstab/types.hpp"

namespace curvstab {

// ---------------------------------------------------------------------------
// Model metrics for the numerical oracle.

struct SphereFactorSpec {
  int dim = 3;
  double radius = 1.0;
};

// g + t * f * g_target with f the k-th zonal harmonic on the source factor,
// normalized to unit L2 norm over the product.
struct ConformalPerturbation {
  int source_factor = 0;
  int target_factor = 1;
  int harmonic_k = 1;
};

struct ProductSpheresModel {
  std::vector<SphereFactorSpec> factors;
  std::optional<ConformalPerturbation> perturbation;
};

// Product of a round 3-sphere with a round 3-sphere or a circle, realized as
// a bi-invariant metric on su(2)+su(2) or su(2)+u(1); the optional
// perturbation is g + t * a0 (.) a1 for unit-norm Killing co-frame elements.
// One-point evaluation suffices.
struct LieGroupProductModel {
  double radius0 = 1.0;
  double radius1 = 1.0;
  bool mixed_tt = true;
  int dim1 = 3;  // 3 or 1
};

struct ChartFactor {
  enum class Kind { Sphere, Hyperbolic } kind = Kind::Sphere;
  int dim = 3;
  double radius = 1.0;  // |K| = 1/radius^2
};

// Pointwise-only product chart (sphere charts in polar coordinates,
// hyperbolic factors on the Poincare ball).
struct ProductChartModel {
  std::vector<ChartFactor> factors;
};

using MetricModel = std::variant<ProductSpheresModel, LieGroupProductModel, ProductChartModel>;

int model_dim(const MetricModel& model);

// Draws an interior chart point away from coordinate degeneracies.
Eigen::VectorXd random_chart_point(const MetricModel& model, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Pointwise curvature.

struct CurvatureBundle {
  int dim = 0;
  Eigen::MatrixXd metric;
  Eigen::MatrixXd metric_inv;
  std::vector<double> riemann;  // lowered components, row-major 4-index
  Eigen::MatrixXd ricci;
  double scalar = 0.0;

  double riem(int i, int j, int k, int l) const {
    return riemann[static_cast<size_t>(((i * dim + j) * dim + k) * dim + l)];
  }
};

struct InvariantSet {
  double s = 0.0;
  double ric_sq = 0.0;
  double riem_sq = 0.0;
  double weyl_sq = 0.0;
};

// Curvature at a chart point; `amplitude` is the perturbation parameter t.
// Lie-group models ignore the point (homogeneous).
CurvatureBundle curvature_at(const MetricModel& model, const Eigen::VectorXd& point,
                             double amplitude = 0.0);

// s, |r|^2, |R|^2 and |W|^2 via the trace identity; |W|^2 below 1e-10 is
// clamped to zero.
InvariantSet invariants(const CurvatureBundle& bundle);

// Checked-curvature tensor Rcheck_pq = R_pijk R_q^ijk.
Eigen::MatrixXd rcheck_tensor(const CurvatureBundle& bundle);

// Curvature assembly directly from order-2 metric jets; used by tests that
// build bespoke chart metrics.
CurvatureBundle curvature_from_metric_jets(const std::vector<std::vector<Jet2>>& metric_jets);

// ---------------------------------------------------------------------------
// Global functionals.

struct QuadratureOptions {
  int initial_nodes = 32;
  int max_nodes = 4096;
  double rel_tol = 1e-10;
};

// Integral of the functional's curvature integrand; normalized = true applies
// the scale-invariant volume power V^((4-n)/n).
double functional_value(const FunctionalId& functional, const MetricModel& model,
                        bool normalized, double amplitude = 0.0,
                        const QuadratureOptions& quad = {});

double model_volume(const MetricModel& model, double amplitude = 0.0,
                    const QuadratureOptions& quad = {});

// ---------------------------------------------------------------------------
// Finite-difference second variation.

struct FdOptions {
  QuadratureOptions quad;
  double base_step = 0.0;        // 0 = choose eps^(1/6) scaled by the direction size
  double first_derivative_tol = 1e-6;
  bool check_critical = true;
};

struct FdResult {
  double value = 0.0;            // d^2/dt^2 of the normalized functional, per V0^((4-n)/n)
  double error_estimate = 0.0;   // difference of the two stencil estimates
  double first_derivative = 0.0;
  double step = 0.0;
};

FdResult fd_second_variation(const FunctionalId& functional, const MetricModel& model,
                             const FdOptions& opts = {});

// d/dt of the checked-curvature tensor paired against the mixed TT direction
// on a Lie-group model, volume-free and per unit direction norms.
FdResult rcheck_pairing_fd(const LieGroupProductModel& model);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Unit-sphere volume 2 pi^((k+1)/2) / Gamma((k+1)/2).
double unit_sphere_volume(int k);

// Zonal harmonic (Gegenbauer) data on a round sphere factor: eigenvalue of
// the k-th zonal harmonic.
double zonal_eigenvalue(int dim, double radius, int k);

} // namespace curvstab

#endif
