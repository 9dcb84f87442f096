#ifndef CURVSTAB_SPECTRAL_HPP
#define CURVSTAB_SPECTRAL_HPP

#include "curvstab/types.hpp"

namespace curvstab {

// Linearized curvature terms paired against a variation direction, per unit
// L2 norm of the direction data.  All values are volume-free.
enum class TermId { DeltaDdDr, DstarDr, RcircR, RcheckPrime, GradS };

std::string to_string(TermId id);

// L2 pairing <T'(h), h> of the named linearized term for h built from the
// direction.  RcheckPrime needs space-form factors; the curvature-generic
// form is used for positive-curvature factors of any radius and reduces to
// the fixed-curvature statement at K = (1, -1).
double linearized_term(TermId id, const VariationDirection& direction,
                       const ProductSpace& product);

// Second-variation quadratic forms H(h,h) of the volume-normalized
// functionals, per unit direction norm (||f|| = 1, ||alpha_i|| = 1).
QuadraticFormReport hessian_conformal(const FunctionalId& functional,
                                      const ProductSpace& product,
                                      const ConformalScale& direction,
                                      const ValidationOptions& opts = {});

QuadraticFormReport hessian_mixed_tt(const FunctionalId& functional,
                                     const ProductSpace& product,
                                     const MixedTT& direction,
                                     const ValidationOptions& opts = {});

QuadraticFormReport hessian_factor_tt(const FunctionalId& functional,
                                      const ProductSpace& product,
                                      const FactorTT& direction);

QuadraticFormReport hessian(const FunctionalId& functional, const ProductSpace& product,
                            const VariationDirection& direction,
                            const ValidationOptions& opts = {});

// Root of (a+1)x^2 - (a-6)x - 2(a-4) for a >= 5; -inf for a in {3, 4}
// where the polynomial is positive for every x > 0.
double threshold_c(int a);

// Positivity threshold for the opposite-sign warped family, in terms of the
// positive factor's dimension; -inf when the discriminant is negative.
double opposite_sign_threshold(int n_positive);

struct RicWarped { int a; };
struct FtOppositeBranch { int n; double t; int branch; };

double stability_polynomial(const RicWarped& kind, double x);
double stability_polynomial(const FtOppositeBranch& kind, double x);

// Coefficients of the opposite-sign F_t conformal polynomials and the
// associated sign-discriminant D as stated (see README on the D convention).
struct FtCoefficients {
  double a, b0, b1, c, D;
};
FtCoefficients ft_coefficients(int n, double t);

namespace detail {

// Conformal assemblies from the individual linearized terms, valid for any
// pair of Einstein constants.  Used by the term-decomposition checks and by
// the verification harness.
double conformal_ric_assembly(const ProductSpace& product, const ConformalScale& dir);
double conformal_s_assembly(const ProductSpace& product, const ConformalScale& dir);
// Space-form products only (any curvature signs).
double conformal_r_assembly(const ProductSpace& product, const ConformalScale& dir);

double mixed_ric_general(const ProductSpace& product, const MixedTT& dir);
double mixed_s_general(const ProductSpace& product, const MixedTT& dir);
double mixed_r_assembly(const ProductSpace& product, const MixedTT& dir);

// Curvature-generic linearization of the checked-curvature pairing for
// mixed TT directions on space-form products (oracle-calibrated), and the
// dispatcher that also covers the stated opposite-curvature case.
double rcheck_generic(double K0, double K1, double lam0, double lam1, double nu0, double nu1);
double rcheck_mixed_value(double K0, double K1, int n0, int n1, double nu0, double nu1);

} // namespace detail

} // namespace curvstab

#endif
