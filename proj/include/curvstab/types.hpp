#ifndef CURVSTAB_TYPES_HPP
#define CURVSTAB_TYPES_HPP

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "curvstab/errors.hpp"

namespace curvstab {

enum class FactorKind { Sphere, HyperbolicQuotient, ComplexProjective, AbstractEinstein, SpaceForm };
enum class TriState { Yes, No, Unknown };

std::string to_string(FactorKind k);
std::string to_string(TriState s);
FactorKind factor_kind_from_string(const std::string& s);
TriState tri_state_from_string(const std::string& s);

// Per-t stability facts for F_t, consumed from the caller.  Keys are exact
// t values; the optional blanket entry applies when no key matches.
struct FtStabilityFacts {
  std::optional<TriState> all;
  std::vector<std::pair<double, TriState>> entries;

  TriState at(double t, double tol = 1e-9) const;
  bool empty() const { return !all.has_value() && entries.empty(); }
};

// One closed Einstein factor, carried as spectral data.
struct EinsteinFactor {
  FactorKind kind = FactorKind::AbstractEinstein;
  int dim = 0;
  double einstein_const = 0.0;            // lambda, r = lambda * g
  std::optional<double> sectional;        // K, space-form kinds
  std::optional<double> mu_fn;            // first nonzero eigenvalue on mean-zero functions
  std::optional<double> mu_oneform;       // first Hodge eigenvalue on co-closed 1-forms
  TriState ric_stable = TriState::Unknown;
  FtStabilityFacts ft_stable;

  double lambda() const { return einstein_const; }

  // Sectional curvature when the factor is (or is forced to be) a space form.
  std::optional<double> curvature() const;

  // Sphere factors have mu_fn = dim * K even when the caller omits it.
  std::optional<double> mu_fn_effective() const;

  bool is_space_form() const;

  // Throws InvalidSpectralData on violated invariants (Lichnerowicz bound,
  // one-form spectral bound, space-form consistency).
  void validate(double tol = 1e-9) const;
};

struct ProductSpace {
  std::vector<EinsteinFactor> factors;

  int total_dim() const;
  void validate(double tol = 1e-9) const;

  // |lambda_0| = |lambda_1| within tolerance (two factors).
  bool ric_critical(double tol = 1e-9) const;
  // lambda_0 = lambda_1, or opposite signs with n_0 = n_1.
  bool ft_critical(double tol = 1e-9) const;

  // Pointwise |r|^2 = sum n_i lambda_i^2 and s = sum n_i lambda_i.
  double ricci_norm_sq() const;
  double scalar() const;
};

// h = f * g_target with f a mean-zero eigenfunction on the source factor,
// ||f|| = 1, ||df||^2 = mu, ||Delta f||^2 = mu^2.
struct ConformalScale {
  int source_factor = 0;
  int target_factor = 1;
  double mu = 0.0;
};

// h = alpha_0 (.) alpha_1 for unit-norm divergence-free 1-forms; nu_i are
// <Delta alpha_i, alpha_i>, the Laplacian norms default to the eigenform
// values nu_i^2.
struct MixedTT {
  double nu0 = 0.0;
  double nu1 = 0.0;
  std::optional<double> norm_laplacian_sq0;
  std::optional<double> norm_laplacian_sq1;

  double lap_sq0() const { return norm_laplacian_sq0.value_or(nu0 * nu0); }
  double lap_sq1() const { return norm_laplacian_sq1.value_or(nu1 * nu1); }
};

// TT-tensor pulled back from one factor, carried through its factor-level
// Hessian lower bound.
struct FactorTT {
  int factor = 0;
  std::optional<double> factor_hessian_lower_bound;
};

using VariationDirection = std::variant<ConformalScale, MixedTT, FactorTT>;

struct ValidationOptions {
  double tol = 1e-9;
  bool strict_bochner = false;  // reject nu_i == lambda_i exactly on positive factors
};

void validate_direction(const ProductSpace& product, const VariationDirection& dir,
                        const ValidationOptions& opts = {});

struct FunctionalId {
  enum class Kind { Ric, S, Ft, R, W2, WnHalf };
  Kind kind = Kind::Ric;
  double t = 0.0;  // only meaningful for Ft

  static FunctionalId Ric() { return {Kind::Ric, 0.0}; }
  static FunctionalId S() { return {Kind::S, 0.0}; }
  static FunctionalId Ft(double t) { return {Kind::Ft, t}; }
  static FunctionalId R() { return {Kind::R, 0.0}; }
  static FunctionalId W2() { return {Kind::W2, 0.0}; }
  static FunctionalId WnHalf() { return {Kind::WnHalf, 0.0}; }

  // Ft(0) is Ric by definition.
  FunctionalId normalized() const {
    if (kind == Kind::Ft && t == 0.0) return Ric();
    return *this;
  }
  std::string name() const;
};

struct HessianTerm {
  std::string label;
  double value = 0.0;
  // Decomposition where meaningful: coefficient of ||Delta .||^2, coefficient
  // of ||d .||^2 (or of <Delta alpha, alpha>), and the constant part.  Cross
  // products of the two one-form eigenvalues are reported through `value`.
  double coeff_delta_sq = 0.0;
  double coeff_grad = 0.0;
  double constant = 0.0;
};

struct QuadraticFormReport {
  FunctionalId functional;
  VariationDirection direction;
  double value = 0.0;
  std::vector<HessianTerm> terms;
  bool defined = true;
  std::string note;

  double term_sum() const;
};

// -inf sentinels: vacuous thresholds compare uniformly, and factors reported
// unstable carry no finite lower bound.
inline constexpr double kVacuousThreshold = -std::numeric_limits<double>::infinity();
inline constexpr double kUnstableSentinel = -std::numeric_limits<double>::infinity();

} // namespace curvstab

#endif
