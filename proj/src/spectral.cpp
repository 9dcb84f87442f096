#include "curvstab/spectral.hpp"

#include <cmath>
#include <limits>

namespace curvstab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

struct TwoFactor {
  int n0, n1, n;
  double lam0, lam1;
  double lam_sum() const { return lam0 + lam1; }
};

TwoFactor two_factor(const ProductSpace& p) {
  if (p.factors.size() != 2)
    throw UnsupportedCombination("this operation needs a two-factor product");
  TwoFactor t;
  t.n0 = p.factors[0].dim;
  t.n1 = p.factors[1].dim;
  t.n = t.n0 + t.n1;
  t.lam0 = p.factors[0].lambda();
  t.lam1 = p.factors[1].lambda();
  return t;
}

// Space-form curvatures, throwing when a factor is not a space form.
std::pair<double, double> space_form_curvatures(const ProductSpace& p) {
  double K[2];
  for (int i = 0; i < 2; ++i) {
    const auto& f = p.factors[i];
    if (!f.is_space_form())
      throw UnsupportedCombination("factor " + std::to_string(i) +
                                   " (" + to_string(f.kind) + ") is not a space form");
    K[i] = f.dim == 1 ? 0.0 : f.curvature().value();
  }
  return {K[0], K[1]};
}

struct ConformalData {
  int m;            // target factor dimension
  double lam_t;     // target factor Einstein constant
  double lam_sum;   // lambda_0 + lambda_1
  double mu;
  int n;            // total dimension
  double s;         // scalar curvature
  double r2;        // pointwise |r|^2
};

ConformalData conformal_data(const ProductSpace& p, const ConformalScale& d) {
  ConformalData c;
  c.m = p.factors[d.target_factor].dim;
  c.lam_t = p.factors[d.target_factor].lambda();
  c.lam_sum = 0.0;
  for (const auto& f : p.factors) c.lam_sum += f.lambda();
  if (p.factors.size() != 2)
    throw UnsupportedCombination("conformal directions need a two-factor product");
  c.mu = d.mu;
  c.n = p.total_dim();
  c.s = p.scalar();
  c.r2 = p.ricci_norm_sq();
  return c;
}

} // namespace

std::string to_string(TermId id) {
  switch (id) {
    case TermId::DeltaDdDr: return "DeltaDdDr";
    case TermId::DstarDr: return "DstarDr";
    case TermId::RcircR: return "RcircR";
    case TermId::RcheckPrime: return "RcheckPrime";
    case TermId::GradS: return "GradS";
  }
  return "?";
}

namespace detail {

double rcheck_generic(double K0, double K1, double lam0, double lam1, double nu0, double nu1) {
  (void)lam0;
  (void)lam1;
  // Oracle-calibrated curvature-generic form, pinned by pointwise tensor
  // linearization on sphere products of several radii and dimensions.
  return 2.0 * K0 * nu0 + 2.0 * K1 * nu1;
}

// Dispatch between the curvature-generic form (nonnegative curvatures) and
// the stated fixed-curvature case (opposite curvatures of equal magnitude,
// extended by scale covariance).
double rcheck_mixed_value(double K0, double K1, int n0, int n1, double nu0, double nu1) {
  if (K0 >= 0.0 && K1 >= 0.0) return rcheck_generic(K0, K1, 0, 0, nu0, nu1);
  const double k = std::abs(K0);
  if (K0 * K1 < 0.0 && std::abs(std::abs(K0) - std::abs(K1)) <= 1e-9 * k) {
    const double nu_pos = K0 > 0 ? nu0 : nu1;
    const double nu_neg = K0 > 0 ? nu1 : nu0;
    return 2.0 * k * (nu_pos - nu_neg) - 4.0 * k * k * (n0 + n1 - 2.0);
  }
  throw UnsupportedCombination(
      "no checked-curvature formula for this curvature sign pattern");
}

double conformal_ric_assembly(const ProductSpace& product, const ConformalScale& dir) {
  const auto c = conformal_data(product, dir);
  const double mu2 = c.mu * c.mu;
  const double t1 = c.m * (mu2 - c.lam_sum * c.mu);
  const double t2 = 0.5 * c.m * (mu2 - 2.0 * c.lam_t * c.mu);
  const double t3 = c.lam_t * c.m * (c.mu - c.lam_t);
  const double t4 = 0.5 * c.m * c.m * (mu2 - c.lam_t * c.mu);
  const double t5 = 0.5 * c.m * c.m * (c.lam_sum * c.mu - 2.0 * c.lam_t * c.lam_t);
  const double t6 = (2.0 / c.n) * c.r2 * c.m;
  return t1 - t2 - 2.0 * t3 + t4 + t5 + t6;
}

double conformal_s_assembly(const ProductSpace& product, const ConformalScale& dir) {
  const auto c = conformal_data(product, dir);
  const double mu2 = c.mu * c.mu;
  const double m2 = static_cast<double>(c.m) * c.m;
  const double t_dd = 2.0 * m2 * (mu2 - c.lam_t * c.mu);
  const double t_sr = -2.0 * c.lam_t * m2 * (c.mu - c.lam_t);
  const double t_rp = -c.s * c.m * c.mu;
  const double t_sg = c.s * m2 * (c.mu - c.lam_t);
  const double t_vol = (2.0 / c.n) * c.s * c.s * c.m;
  return t_dd + t_sr + t_rp + t_sg + t_vol;
}

double conformal_r_assembly(const ProductSpace& product, const ConformalScale& dir) {
  const auto c = conformal_data(product, dir);
  const auto [K0, K1] = space_form_curvatures(product);
  const double Kt = dir.target_factor == 0 ? K0 : K1;
  const int m = c.m;
  const double Ri2 = 2.0 * m * (m - 1) * Kt * Kt;
  const double R2 = 2.0 * product.factors[0].dim * (product.factors[0].dim - 1) * K0 * K0 +
                    2.0 * product.factors[1].dim * (product.factors[1].dim - 1) * K1 * K1;
  const double t1 = 2.0 * m * (c.mu * c.mu - c.lam_sum * c.mu);
  return t1 + 2.0 * Ri2 - m * Ri2 + (2.0 / c.n) * R2 * m;
}

double mixed_ric_general(const ProductSpace& product, const MixedTT& d) {
  const auto f = two_factor(product);
  const double dd = d.lap_sq0() + d.lap_sq1();
  const double cross = 2.0 * d.nu0 * d.nu1;
  return dd + cross - (3.0 * f.lam0 + 2.0 * f.lam1) * d.nu0 -
         (2.0 * f.lam0 + 3.0 * f.lam1) * d.nu1 + 4.0 * f.lam0 * f.lam1 +
         (4.0 / f.n) * product.ricci_norm_sq();
}

double mixed_s_general(const ProductSpace& product, const MixedTT& d) {
  const auto f = two_factor(product);
  const double s = product.scalar();
  return (4.0 / f.n) * s * s - 2.0 * s * (d.nu0 + d.nu1);
}

double mixed_r_assembly(const ProductSpace& product, const MixedTT& d) {
  const auto f = two_factor(product);
  const auto [K0, K1] = space_form_curvatures(product);
  const double l1 = linearized_term(TermId::DeltaDdDr, d, product);
  const double g = rcheck_mixed_value(K0, K1, f.n0, f.n1, d.nu0, d.nu1);
  const double R2 = 2.0 * f.n0 * (f.n0 - 1) * K0 * K0 + 2.0 * f.n1 * (f.n1 - 1) * K1 * K1;
  return 2.0 * l1 - 2.0 * g + (4.0 / f.n) * R2;
}

} // namespace detail

double linearized_term(TermId id, const VariationDirection& direction,
                       const ProductSpace& product) {
  product.validate();
  validate_direction(product, direction);

  if (const auto* c = std::get_if<ConformalScale>(&direction)) {
    const auto cd = conformal_data(product, *c);
    const double mu2 = cd.mu * cd.mu;
    switch (id) {
      case TermId::DeltaDdDr:
        return cd.m * (mu2 - cd.lam_sum * cd.mu);
      case TermId::DstarDr:
        return 0.5 * cd.m * (mu2 - 2.0 * cd.lam_t * cd.mu);
      case TermId::RcircR:
        return cd.lam_t * cd.m * (cd.mu - cd.lam_t);
      case TermId::RcheckPrime: {
        const auto [K0, K1] = space_form_curvatures(product);
        const double Kt = c->target_factor == 0 ? K0 : K1;
        return -2.0 * cd.m * (cd.m - 1) * Kt * Kt;  // -|R^i|^2 ||f||^2
      }
      case TermId::GradS:
        return detail::conformal_s_assembly(product, *c);
    }
  }

  if (const auto* m = std::get_if<MixedTT>(&direction)) {
    const auto f = two_factor(product);
    const double dd = m->lap_sq0() + m->lap_sq1();
    const double cross = 2.0 * m->nu0 * m->nu1;
    const double nusum = m->nu0 + m->nu1;
    switch (id) {
      case TermId::DeltaDdDr:
        return 2.0 * (dd + cross) - 2.5 * f.lam_sum() * nusum + 4.0 * f.lam0 * f.lam1;
      case TermId::DstarDr:
        return dd + cross + 4.0 * f.lam0 * f.lam1 -
               0.5 * (3.0 * f.lam0 + 5.0 * f.lam1) * m->nu0 -
               0.5 * (3.0 * f.lam1 + 5.0 * f.lam0) * m->nu1;
      case TermId::RcircR:
        return f.lam_sum() * nusum - 2.0 * f.lam0 * f.lam1;
      case TermId::RcheckPrime: {
        const auto [K0, K1] = space_form_curvatures(product);
        return detail::rcheck_mixed_value(K0, K1, f.n0, f.n1, m->nu0, m->nu1);
      }
      case TermId::GradS:
        return detail::mixed_s_general(product, *m);
    }
  }

  throw UnsupportedCombination("no linearized-term formula for FactorTT directions");
}

namespace {
// Conformal displays.  Sign case selected by the Einstein constants; both
// cases assume |lambda_0| = |lambda_1|.
double conformal_ric_display(const TwoFactor& f, int target, double mu,
                             std::vector<HessianTerm>* terms) {
  const int m = target == 0 ? f.n0 : f.n1;
  const double lam_t = target == 0 ? f.lam0 : f.lam1;
  const double lam = std::abs(f.lam0);
  const double mu2 = mu * mu;
  double v;
  if (close(f.lam0, f.lam1)) {
    v = 0.5 * m * (m + 1) * mu2 + 0.5 * f.lam0 * m * (m - 6) * mu -
        lam * lam * m * (m - 4);
  } else {
    v = 0.5 * m * (m + 1) * mu2 - 0.5 * lam_t * m * (m + 2) * mu -
        lam * lam * m * (m - 4);
  }
  if (terms) {
    terms->push_back({"delta_sq", 0.5 * m * (m + 1) * mu2, 0.5 * m * (m + 1), 0.0, 0.0});
    const double cg = close(f.lam0, f.lam1) ? 0.5 * f.lam0 * m * (m - 6)
                                            : -0.5 * lam_t * m * (m + 2);
    terms->push_back({"grad_sq", cg * mu, 0.0, cg, 0.0});
    terms->push_back({"zeroth", -lam * lam * m * (m - 4), 0.0, 0.0, -lam * lam * m * (m - 4)});
  }
  return v;
}

// Direct closed form for the F_t conformal Hessian (not assembled from the
// Ric and S displays; additivity between the routes is checked in tests).
double conformal_ft_display(const TwoFactor& f, int target, double mu, double t) {
  const int m = target == 0 ? f.n0 : f.n1;
  const double lam_t = target == 0 ? f.lam0 : f.lam1;
  const double lam = std::abs(f.lam0);
  const double mu2 = mu * mu;
  const double A = 0.5 * m * ((4.0 * t + 1.0) * m + 1.0);
  if (close(f.lam0, f.lam1)) {
    const double B = 0.5 * f.lam0 * m * (2.0 * t * (f.n * (m - 1.0) - 4.0 * m) + m - 6.0);
    const double C = -lam * lam * m * (t * (f.n * (m - 2.0) - 2.0 * m) + m - 4.0);
    return A * mu2 + B * mu + C;
  }
  const double B = -0.5 * lam_t * m * ((8.0 * t + 1.0) * m + 2.0);
  const double C = lam * lam * m * (m * (2.0 * t - 1.0) + 4.0);
  return A * mu2 + B * mu + C;
}

double conformal_s_display(const TwoFactor& f, int target, double mu,
                           std::vector<HessianTerm>* terms) {
  const int m = target == 0 ? f.n0 : f.n1;
  const double lam_t = target == 0 ? f.lam0 : f.lam1;
  const double lam = std::abs(f.lam0);
  const double mu2 = mu * mu;
  double cd, cg, c0;
  if (close(f.lam0, f.lam1)) {
    cd = 2.0 * m * m;
    cg = f.lam0 * (f.n * m * (m - 1) - 4.0 * m * m);
    c0 = m * lam * lam * (2.0 * m - f.n * (m - 2));
  } else {
    // opposite signs require n_0 = n_1 for criticality of S
    cd = 2.0 * m * m;
    cg = -4.0 * lam_t * m * m;
    c0 = 2.0 * m * m * lam * lam;
  }
  if (terms) {
    terms->push_back({"delta_sq", cd * mu2, cd, 0.0, 0.0});
    terms->push_back({"grad_sq", cg * mu, 0.0, cg, 0.0});
    terms->push_back({"zeroth", c0, 0.0, 0.0, c0});
  }
  return cd * mu2 + cg * mu + c0;
}

} // namespace

QuadraticFormReport hessian_conformal(const FunctionalId& functional_in,
                                      const ProductSpace& product,
                                      const ConformalScale& direction,
                                      const ValidationOptions& opts) {
  product.validate(opts.tol);
  validate_direction(product, direction, opts);
  const FunctionalId functional = functional_in.normalized();
  const auto f = two_factor(product);

  QuadraticFormReport rep;
  rep.functional = functional;
  rep.direction = direction;

  const bool equal = close(f.lam0, f.lam1, opts.tol);
  const bool opposite = close(f.lam0, -f.lam1, opts.tol) && std::abs(f.lam0) > opts.tol;

  switch (functional.kind) {
    case FunctionalId::Kind::Ric: {
      if (!equal && !opposite)
        throw NotCriticalError("Ric conformal form needs |lambda_0| = |lambda_1|");
      rep.value = conformal_ric_display(f, direction.target_factor, direction.mu, &rep.terms);
      return rep;
    }
    case FunctionalId::Kind::S: {
      if (!equal && !(opposite && f.n0 == f.n1))
        throw NotCriticalError("S conformal form needs lambda_0 = lambda_1, or opposite signs with n_0 = n_1");
      rep.value = conformal_s_display(f, direction.target_factor, direction.mu, &rep.terms);
      return rep;
    }
    case FunctionalId::Kind::Ft: {
      if (!equal && !(opposite && f.n0 == f.n1))
        throw NotCriticalError("F_t conformal form needs lambda_0 = lambda_1, or opposite signs with n_0 = n_1");
      rep.value = conformal_ft_display(f, direction.target_factor, direction.mu, functional.t);
      std::vector<HessianTerm> tr, ts;
      const double vr = conformal_ric_display(f, direction.target_factor, direction.mu, &tr);
      (void)vr;
      const double vs = conformal_s_display(f, direction.target_factor, direction.mu, &ts);
      (void)vs;
      for (auto& t : tr) { t.label = "ric_" + t.label; rep.terms.push_back(t); }
      for (auto& t : ts) {
        t.label = "s_" + t.label;
        t.value *= functional.t;
        t.coeff_delta_sq *= functional.t;
        t.coeff_grad *= functional.t;
        t.constant *= functional.t;
        rep.terms.push_back(t);
      }
      return rep;
    }
    case FunctionalId::Kind::R: {
      const auto [K0, K1] = space_form_curvatures(product);
      (void)K0; (void)K1;
      if (!equal && !opposite)
        throw NotCriticalError("R conformal form needs |lambda_0| = |lambda_1|");
      const double v = detail::conformal_r_assembly(product, direction);
      rep.value = v;
      rep.terms.push_back({"assembled", v, 0.0, 0.0, 0.0});
      if (opposite && f.n0 == f.n1) {
        const int m = f.n0;
        const double K2 = product.factors[0].curvature().value() *
                          product.factors[0].curvature().value();
        rep.note = "closed form 2m||Delta f||^2 - 2m(m-1)(m-4)K^2||f||^2, m = " +
                   std::to_string(m) + ", K^2 = " + std::to_string(K2);
      }
      return rep;
    }
    case FunctionalId::Kind::W2: {
      // Computable by composition at space-form products with |lambda_0| = |lambda_1|.
      if (!product.factors[0].is_space_form() || !product.factors[1].is_space_form() ||
          (!equal && !opposite)) {
        rep.defined = false;
        rep.note = "no conformal formula for W2 outside balanced space-form products";
        return rep;
      }
      bool s_defined = equal || (opposite && f.n0 == f.n1);
      if (!s_defined) {
        rep.defined = false;
        rep.note = "W2 conformal composition needs the scalar part, undefined here";
        return rep;
      }
      const double vr = detail::conformal_r_assembly(product, direction);
      const double vric = conformal_ric_display(f, direction.target_factor, direction.mu, nullptr);
      const double vs = conformal_s_display(f, direction.target_factor, direction.mu, nullptr);
      const double nn = f.n;
      rep.value = vr - (4.0 / (nn - 2)) * (vric - vs / (2.0 * (nn - 1)));
      rep.terms.push_back({"r_part", vr, 0.0, 0.0, 0.0});
      rep.terms.push_back({"ric_part", -(4.0 / (nn - 2)) * vric, 0.0, 0.0, 0.0});
      rep.terms.push_back({"s_part", (4.0 / (nn - 2)) * vs / (2.0 * (nn - 1)), 0.0, 0.0, 0.0});
      rep.note = "composed from the R, Ric and S conformal forms";
      return rep;
    }
    case FunctionalId::Kind::WnHalf: {
      rep.defined = false;
      rep.note = "no conformal formula for WnHalf";
      return rep;
    }
  }
  throw UnsupportedCombination("unhandled functional");
}

namespace {

// Mixed TT displays for F_t at lambda_0 = lambda_1 (independent route used
// by the additivity checks).
double mixed_ft_equal_display(const TwoFactor& f, const MixedTT& d, double t) {
  const double lam = f.lam0;
  const double dd = d.lap_sq0() + d.lap_sq1();
  return dd + 2.0 * d.nu0 * d.nu1 + 4.0 * lam * lam * (2.0 + t * f.n) -
         lam * (5.0 + 2.0 * t * f.n) * (d.nu0 + d.nu1);
}

} // namespace

QuadraticFormReport hessian_mixed_tt(const FunctionalId& functional_in,
                                     const ProductSpace& product,
                                     const MixedTT& direction,
                                     const ValidationOptions& opts) {
  product.validate(opts.tol);
  validate_direction(product, direction, opts);
  const FunctionalId functional = functional_in.normalized();
  const auto f = two_factor(product);

  QuadraticFormReport rep;
  rep.functional = functional;
  rep.direction = direction;

  auto push_assembly_terms = [&](double scale) {
    const double l1 = linearized_term(TermId::DeltaDdDr, direction, product);
    const double l2 = linearized_term(TermId::DstarDr, direction, product);
    const double l3 = linearized_term(TermId::RcircR, direction, product);
    const double vol = (4.0 / f.n) * product.ricci_norm_sq();
    rep.terms.push_back({"DeltaDdDr", scale * l1, 0.0, 0.0, 0.0});
    rep.terms.push_back({"DstarDr", -scale * l2, 0.0, 0.0, 0.0});
    rep.terms.push_back({"RcircR", -2.0 * scale * l3, 0.0, 0.0, 0.0});
    rep.terms.push_back({"volume", scale * vol, 0.0, 0.0, scale * vol});
  };

  switch (functional.kind) {
    case FunctionalId::Kind::Ric: {
      rep.value = detail::mixed_ric_general(product, direction);
      push_assembly_terms(1.0);
      return rep;
    }
    case FunctionalId::Kind::S: {
      rep.value = detail::mixed_s_general(product, direction);
      const double s = product.scalar();
      rep.terms.push_back({"GradS", rep.value, 0.0, -2.0 * s, (4.0 / f.n) * s * s});
      return rep;
    }
    case FunctionalId::Kind::Ft: {
      const double t = functional.t;
      if (close(f.lam0, f.lam1, opts.tol)) {
        rep.value = mixed_ft_equal_display(f, direction, t);
      } else {
        rep.value = detail::mixed_ric_general(product, direction) +
                    t * detail::mixed_s_general(product, direction);
      }
      rep.terms.push_back({"ric_part", detail::mixed_ric_general(product, direction), 0.0, 0.0, 0.0});
      rep.terms.push_back({"s_part", t * detail::mixed_s_general(product, direction), 0.0, 0.0, 0.0});
      return rep;
    }
    case FunctionalId::Kind::R: {
      rep.value = detail::mixed_r_assembly(product, direction);
      const auto [K0, K1] = space_form_curvatures(product);
      const double g = detail::rcheck_mixed_value(K0, K1, f.n0, f.n1, direction.nu0, direction.nu1);
      const double l1 = linearized_term(TermId::DeltaDdDr, direction, product);
      const double R2 = 2.0 * f.n0 * (f.n0 - 1) * K0 * K0 + 2.0 * f.n1 * (f.n1 - 1) * K1 * K1;
      rep.terms.push_back({"DeltaDdDr", 2.0 * l1, 0.0, 0.0, 0.0});
      rep.terms.push_back({"RcheckPrime", -2.0 * g, 0.0, 0.0, 0.0});
      rep.terms.push_back({"volume", (4.0 / f.n) * R2, 0.0, 0.0, (4.0 / f.n) * R2});
      return rep;
    }
    case FunctionalId::Kind::W2:
    case FunctionalId::Kind::WnHalf: {
      const double vr = detail::mixed_r_assembly(product, direction);
      const double vric = detail::mixed_ric_general(product, direction);
      const double vs = detail::mixed_s_general(product, direction);
      const double nn = f.n;
      const double w2 = vr - (4.0 / (nn - 2)) * (vric - vs / (2.0 * (nn - 1)));
      rep.value = w2;
      rep.terms.push_back({"r_part", vr, 0.0, 0.0, 0.0});
      rep.terms.push_back({"ric_part", -(4.0 / (nn - 2)) * vric, 0.0, 0.0, 0.0});
      rep.terms.push_back({"s_part", (4.0 / (nn - 2)) * vs / (2.0 * (nn - 1)), 0.0, 0.0, 0.0});
      if (functional.kind == FunctionalId::Kind::WnHalf) {
        if (f.n < 5)
          throw UnsupportedCombination("WnHalf mixed form needs total dimension >= 5");
        rep.note = "scaled by |W|^((n-4)/2) > 0; sign and positivity agree with the W2 form";
      } else {
        rep.note = "composed from the R, Ric and S mixed forms";
      }
      return rep;
    }
  }
  throw UnsupportedCombination("unhandled functional");
}

QuadraticFormReport hessian_factor_tt(const FunctionalId& functional,
                                      const ProductSpace& product,
                                      const FactorTT& direction) {
  product.validate();
  validate_direction(product, direction);
  QuadraticFormReport rep;
  rep.functional = functional.normalized();
  rep.direction = direction;
  if (direction.factor_hessian_lower_bound.has_value()) {
    rep.value = *direction.factor_hessian_lower_bound;
    rep.note = "factor-level Hessian lower bound, user-supplied";
    rep.terms.push_back({"factor_bound", rep.value, 0.0, 0.0, rep.value});
    return rep;
  }
  const auto& f = product.factors[direction.factor];
  const bool flagged_unstable =
      (rep.functional.kind == FunctionalId::Kind::Ric && f.ric_stable == TriState::No) ||
      (rep.functional.kind == FunctionalId::Kind::Ft &&
       f.ft_stable.at(rep.functional.t) == TriState::No);
  if (flagged_unstable) {
    rep.value = kUnstableSentinel;
    rep.note = "factor flagged unstable; nonpositive sentinel bound";
    rep.terms.push_back({"factor_bound", rep.value, 0.0, 0.0, rep.value});
    return rep;
  }
  throw MissingFactorData("no factor-level Hessian bound supplied for factor " +
                          std::to_string(direction.factor));
}

QuadraticFormReport hessian(const FunctionalId& functional, const ProductSpace& product,
                            const VariationDirection& direction,
                            const ValidationOptions& opts) {
  if (const auto* c = std::get_if<ConformalScale>(&direction))
    return hessian_conformal(functional, product, *c, opts);
  if (const auto* m = std::get_if<MixedTT>(&direction))
    return hessian_mixed_tt(functional, product, *m, opts);
  return hessian_factor_tt(functional, product, std::get<FactorTT>(direction));
}

double threshold_c(int a) {
  if (a < 3) throw DomainError("threshold_c needs a >= 3");
  if (a == 3 || a == 4) return kVacuousThreshold;
  const double disc = 9.0 * a * a - 36.0 * a + 4.0;
  return (a - 6.0 + std::sqrt(disc)) / (2.0 * (a + 1.0));
}

double opposite_sign_threshold(int n_positive) {
  if (n_positive < 3) throw DomainError("opposite_sign_threshold needs n >= 3");
  const double disc = 9.0 * n_positive * n_positive - 20.0 * n_positive - 28.0;
  if (disc < 0.0) return kVacuousThreshold;
  return (n_positive + 2.0 + std::sqrt(disc)) / (2.0 * (n_positive + 1.0));
}

double stability_polynomial(const RicWarped& kind, double x) {
  if (kind.a < 3) throw DomainError("warped polynomial needs a >= 3");
  const double a = kind.a;
  return (a + 1.0) * x * x - (a - 6.0) * x - 2.0 * (a - 4.0);
}

double stability_polynomial(const FtOppositeBranch& kind, double x) {
  if (kind.n < 3) throw DomainError("opposite-sign polynomial needs n >= 3");
  if (kind.branch != 0 && kind.branch != 1) throw DomainError("branch must be 0 or 1");
  const auto co = ft_coefficients(kind.n, kind.t);
  const double b = kind.branch == 0 ? co.b0 : co.b1;
  return co.a * x * x + b * x + co.c;
}

FtCoefficients ft_coefficients(int n, double t) {
  if (n < 3) throw DomainError("ft_coefficients needs n >= 3");
  FtCoefficients co;
  co.a = (4.0 * t + 1.0) * n + 1.0;
  co.b0 = -((8.0 * t + 1.0) * n + 2.0);
  co.b1 = -co.b0;
  co.c = 2.0 * (2.0 * t - 1.0) * n + 8.0;
  co.D = 4.0 * n * t * (8.0 * n - 7.0) + (9.0 * n * n - 20.0 * n - 28.0);
  return co;
}

} // namespace curvstab
