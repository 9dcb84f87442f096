#include "curvstab/classifier.hpp"

#include <cmath>
#include <sstream>

namespace curvstab {

namespace {

enum class Check { Pass, Boundary, Fail };

// Strict comparison x > threshold with a relative boundary band.
Check three_way(double x, double threshold, double band) {
  if (std::isinf(threshold) && threshold < 0) return Check::Pass;
  const double scale = std::max(1.0, std::abs(threshold));
  if (std::abs(x - threshold) <= band * scale) return Check::Boundary;
  return x > threshold ? Check::Pass : Check::Fail;
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

struct FactorAssessment {
  TriState state = TriState::Unknown;
  bool boundary = false;
  std::string note;
  std::string missing;
};

FactorAssessment assess_ric(const EinsteinFactor& f, int index, double band) {
  FactorAssessment a;
  const std::string tag = "factor " + std::to_string(index) + " (" + to_string(f.kind) +
                          " dim " + std::to_string(f.dim) + ")";
  auto hyperbolic_rule = [&]() {
    if (f.dim <= 4) {
      a.state = TriState::Yes;
      a.note = tag + ": stable, dimension <= 4 (known-case table)";
      return;
    }
    const auto mu = f.mu_fn_effective();
    if (!mu.has_value()) {
      a.state = TriState::Unknown;
      a.missing = tag + ": mu_fn required for the single-factor criterion";
      return;
    }
    const double ratio = *mu / std::abs(f.lambda());
    const double bound = 2.0 * (f.dim - 4.0) / f.dim;
    const Check c = three_way(ratio, bound, band);
    a.boundary = (c == Check::Boundary);
    a.state = (c == Check::Pass) ? TriState::Yes : TriState::No;
    a.note = tag + ": mu/|lambda| = " + fmt(ratio) + " vs single-factor bound 2(n-4)/n = " +
             fmt(bound) + " (known-case table)";
  };

  switch (f.kind) {
    case FactorKind::Sphere:
      if (f.dim >= 3) {
        a.state = TriState::Yes;
        a.note = tag + ": stable (spherical space form, known-case table)";
      } else {
        a.missing = tag + ": no single-factor rule below dimension 3";
      }
      return a;
    case FactorKind::ComplexProjective:
      a.state = TriState::Yes;
      a.note = tag + ": stable (complex projective space, known-case table)";
      return a;
    case FactorKind::HyperbolicQuotient:
      hyperbolic_rule();
      return a;
    case FactorKind::SpaceForm: {
      const double K = f.curvature().value_or(0.0);
      if (K > 0.0 && f.dim >= 3) {
        a.state = TriState::Yes;
        a.note = tag + ": stable (spherical space form, known-case table)";
      } else if (K < 0.0) {
        hyperbolic_rule();
      } else {
        a.missing = tag + ": no single-factor rule for this space form";
      }
      return a;
    }
    case FactorKind::AbstractEinstein:
      a.state = f.ric_stable;
      a.note = tag + ": stability flag " + to_string(f.ric_stable) + " (user-supplied)";
      if (f.ric_stable == TriState::Unknown)
        a.missing = tag + ": ric_stable flag is unknown";
      return a;
  }
  return a;
}

Witness conformal_witness(const ProductSpace& p, int source, int target, double mu,
                          const FunctionalId& functional, const std::string& why) {
  Witness w;
  ConformalScale dir{source, target, mu};
  w.direction = dir;
  w.value = hessian_conformal(functional, p, dir).value;
  w.description = why;
  return w;
}

Witness factor_witness(const ProductSpace& p, int index, const FunctionalId& functional,
                       const std::string& why) {
  Witness w;
  FactorTT dir{index, std::nullopt};
  w.direction = dir;
  w.value = hessian_factor_tt(functional, p, dir).value;
  w.description = why;
  return w;
}

struct DirectionOutcome {
  Check check;
  std::optional<Witness> witness;
  std::optional<double> hessian_value;
  std::string missing;
};

// One warped direction: eigenfunction on `source` scaling the other factor.
DirectionOutcome warped_direction(const ProductSpace& p, int source, double lam_abs,
                                  double threshold, const ClassifyOptions& opts) {
  DirectionOutcome out;
  out.check = Check::Pass;
  const int target = 1 - source;
  const auto mu = p.factors[source].mu_fn_effective();
  if (std::isinf(threshold) && threshold < 0) {
    // vacuous: positive for every admissible eigenvalue
    if (mu.has_value()) {
      ConformalScale dir{source, target, *mu};
      out.hessian_value = hessian_conformal(FunctionalId::Ric(), p, dir).value;
    }
    return out;
  }
  if (!mu.has_value()) {
    out.missing = "factor " + std::to_string(source) + ": mu_fn required for the warped criterion";
    out.check = Check::Fail;  // caller treats missing as indeterminate
    return out;
  }
  const double x = *mu / lam_abs;
  out.check = three_way(x, threshold, opts.marginal_band);
  ConformalScale dir{source, target, *mu};
  out.hessian_value = hessian_conformal(FunctionalId::Ric(), p, dir).value;
  if (out.check != Check::Pass) {
    Witness w;
    w.direction = dir;
    w.value = *out.hessian_value;
    w.description = "eigenfunction on factor " + std::to_string(source) + " scaling factor " +
                    std::to_string(target) + " metric; mu/|lambda| = " + fmt(x) +
                    " vs threshold " + fmt(threshold);
    out.witness = w;
  }
  return out;
}

} // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::Stable: return "Stable";
    case Status::Unstable: return "Unstable";
    case Status::Marginal: return "Marginal";
    case Status::NotCritical: return "NotCritical";
    case Status::Indeterminate: return "Indeterminate";
  }
  return "?";
}

TriState factor_ric_stability(const EinsteinFactor& factor) {
  factor.validate();
  return assess_ric(factor, 0, 0.0).state;
}

StabilityVerdict classify_warped(const ProductSpace& product, const ClassifyOptions& opts) {
  product.validate();
  StabilityVerdict v;
  if (product.factors.size() != 2) {
    v.status = Status::Indeterminate;
    v.assumptions.push_back("warped criterion applies to two-factor products only");
    return v;
  }
  const auto& f0 = product.factors[0];
  const auto& f1 = product.factors[1];
  if (f0.dim < 3 || f1.dim < 3) {
    v.status = Status::Indeterminate;
    v.assumptions.push_back("warped criterion needs both factor dimensions >= 3");
    return v;
  }
  if (!product.ric_critical(opts.criticality_tol)) {
    v.status = Status::NotCritical;
    v.assumptions.push_back("|lambda_0| != |lambda_1|; not a critical point");
    return v;
  }
  const double l0 = f0.lambda(), l1 = f1.lambda();
  const double lam = std::abs(l0);
  if (lam <= opts.criticality_tol) {
    v.status = Status::Indeterminate;
    v.assumptions.push_back("Ricci-flat factors are outside the warped criterion");
    return v;
  }

  std::vector<DirectionOutcome> outs;
  if (l0 > 0 && l1 > 0) {
    // equal positive constants: stable for every admissible eigenvalue
    v.assumptions.push_back("lambda_0 = lambda_1 > 0: warped directions are positive");
    for (int src : {0, 1}) outs.push_back(warped_direction(product, src, lam, kVacuousThreshold, opts));
  } else if (l0 < 0 && l1 < 0) {
    for (int src : {0, 1}) {
      const int target = 1 - src;
      const double thr = threshold_c(product.factors[target].dim);
      v.assumptions.push_back("direction " + std::to_string(src) + "->" + std::to_string(target) +
                              ": threshold c(" + std::to_string(product.factors[target].dim) +
                              ") = " + (std::isinf(thr) ? std::string("vacuous") : fmt(thr)));
      outs.push_back(warped_direction(product, src, lam, thr, opts));
    }
  } else {
    const int pos = l0 > 0 ? 0 : 1;
    const int neg = 1 - pos;
    // function on the positive factor: positive since mu/lambda > 1
    v.assumptions.push_back("direction " + std::to_string(pos) + "->" + std::to_string(neg) +
                            ": positive for every admissible eigenvalue (mu/lambda > 1)");
    outs.push_back(warped_direction(product, pos, lam, kVacuousThreshold, opts));
    const double thr = opposite_sign_threshold(product.factors[pos].dim);
    v.assumptions.push_back("direction " + std::to_string(neg) + "->" + std::to_string(pos) +
                            ": threshold " + (std::isinf(thr) ? std::string("vacuous") : fmt(thr)));
    outs.push_back(warped_direction(product, neg, lam, thr, opts));
  }

  bool any_fail = false, any_boundary = false;
  std::vector<std::string> missing;
  for (const auto& o : outs) {
    if (!o.missing.empty()) {
      missing.push_back(o.missing);
      continue;
    }
    if (o.check == Check::Fail) any_fail = true;
    if (o.check == Check::Boundary) any_boundary = true;
    if (o.witness.has_value()) v.witnesses.push_back(*o.witness);
    if (o.hessian_value.has_value())
      v.margin = v.margin.has_value() ? std::min(*v.margin, *o.hessian_value) : *o.hessian_value;
  }
  if (any_fail) {
    v.status = Status::Unstable;
    // keep only strictly failing witnesses first
    return v;
  }
  if (!missing.empty()) {
    v.status = Status::Indeterminate;
    for (auto& m : missing) v.assumptions.push_back("missing: " + m);
    return v;
  }
  v.status = any_boundary ? Status::Marginal : Status::Stable;
  return v;
}

namespace {

StabilityVerdict classify_ric(const ProductSpace& product_in, const ClassifyOptions& opts) {
  ProductSpace product = product_in;
  StabilityVerdict v;

  if (product.factors.size() == 2 && opts.auto_rescale &&
      !product.ric_critical(opts.criticality_tol)) {
    auto& f1 = product.factors[1];
    const double l0 = std::abs(product.factors[0].lambda());
    const double l1 = std::abs(f1.lambda());
    if (l0 > 0 && l1 > 0) {
      const double c = l1 / l0;  // g_1 -> c g_1 divides lambda and mu by c
      f1.einstein_const /= c;
      if (f1.mu_fn) *f1.mu_fn /= c;
      if (f1.mu_oneform) *f1.mu_oneform /= c;
      if (f1.sectional) *f1.sectional /= c;
      v.assumptions.push_back("factor 1 rescaled by " + fmt(c) + " to balance |lambda|");
    }
  }

  if (product.factors.size() > 2) {
    const double l0 = product.factors[0].lambda();
    bool equal_positive = l0 > 0;
    for (const auto& f : product.factors)
      if (!close(f.lambda(), l0, opts.criticality_tol) || f.lambda() <= 0) equal_positive = false;
    if (!equal_positive) {
      if (!product.ric_critical(opts.criticality_tol)) {
        v.status = Status::NotCritical;
        return v;
      }
      v.status = Status::Indeterminate;
      v.assumptions.push_back(
          "multi-factor products are classified only with equal positive Einstein constants");
      return v;
    }
    v.assumptions.push_back("multi-factor product with equal positive Einstein constants; "
                            "classified by iterated pairing");
    bool any_unknown = false, any_boundary = false;
    for (size_t i = 0; i < product.factors.size(); ++i) {
      const auto a = assess_ric(product.factors[i], static_cast<int>(i), opts.marginal_band);
      if (!a.note.empty()) v.assumptions.push_back(a.note);
      if (a.state == TriState::No) {
        v.status = Status::Unstable;
        v.witnesses.push_back(factor_witness(product, static_cast<int>(i), FunctionalId::Ric(),
                                             "factor " + std::to_string(i) +
                                                 " unstable; pulled-back factor direction"));
        return v;
      }
      if (a.state == TriState::Unknown) {
        any_unknown = true;
        if (!a.missing.empty()) v.assumptions.push_back("missing: " + a.missing);
      }
      any_boundary = any_boundary || a.boundary;
    }
    if (any_unknown) {
      v.status = Status::Indeterminate;
      return v;
    }
    v.status = any_boundary ? Status::Marginal : Status::Stable;
    return v;
  }

  if (!product.ric_critical(opts.criticality_tol)) {
    v.status = Status::NotCritical;
    v.assumptions.push_back("|lambda_0| != |lambda_1|; not a critical point (auto-rescale off)");
    return v;
  }
  if (product.factors[0].dim < 3 || product.factors[1].dim < 3) {
    v.status = Status::Indeterminate;
    v.assumptions.push_back("the two-factor criteria need both dimensions >= 3");
    return v;
  }

  bool any_unknown = false, any_boundary = false;
  for (int i = 0; i < 2; ++i) {
    const auto a = assess_ric(product.factors[i], i, opts.marginal_band);
    if (!a.note.empty()) v.assumptions.push_back(a.note);
    if (a.state == TriState::No) {
      v.status = Status::Unstable;
      v.witnesses.push_back(factor_witness(product, i, FunctionalId::Ric(),
                                           "factor " + std::to_string(i) +
                                               " fails its single-factor criterion"));
      return v;
    }
    if (a.state == TriState::Unknown) {
      any_unknown = true;
      if (!a.missing.empty()) v.assumptions.push_back("missing: " + a.missing);
    }
    any_boundary = any_boundary || a.boundary;
  }

  StabilityVerdict w = classify_warped(product, opts);
  for (const auto& s : w.assumptions) v.assumptions.push_back(s);
  v.witnesses.insert(v.witnesses.end(), w.witnesses.begin(), w.witnesses.end());
  v.margin = w.margin;
  if (w.status == Status::Unstable) {
    v.status = Status::Unstable;
    return v;
  }
  if (any_unknown || w.status == Status::Indeterminate) {
    v.status = Status::Indeterminate;
    return v;
  }
  if (w.status == Status::NotCritical) {
    v.status = Status::NotCritical;
    return v;
  }
  v.status = (any_boundary || w.status == Status::Marginal) ? Status::Marginal : Status::Stable;
  return v;
}

StabilityVerdict classify_ft(double t, const ProductSpace& product, const ClassifyOptions& opts) {
  StabilityVerdict v;
  if (product.factors.size() != 2) {
    v.status = Status::Indeterminate;
    v.assumptions.push_back("the F_t criterion applies to two-factor products");
    return v;
  }
  const auto& f0 = product.factors[0];
  const auto& f1 = product.factors[1];
  const double l0 = f0.lambda(), l1 = f1.lambda();

  if (close(l0, l1, opts.criticality_tol)) {
    v.status = Status::Indeterminate;
    v.assumptions.push_back("equal-sign products are critical for F_t but carry no criterion here");
    return v;
  }
  if (!(close(l0, -l1, opts.criticality_tol) && f0.dim == f1.dim && std::abs(l0) > 0)) {
    v.status = Status::NotCritical;
    v.assumptions.push_back("F_t-critical products need opposite Einstein constants and n_0 = n_1");
    return v;
  }
  const int n = f0.dim;
  if (n < 3) {
    v.status = Status::Indeterminate;
    return v;
  }
  const int pos = l0 > 0 ? 0 : 1;
  const int neg = 1 - pos;
  const double lam = std::abs(l0);

  // factor facts are inputs
  for (int i = 0; i < 2; ++i) {
    const TriState st = product.factors[i].ft_stable.at(t);
    v.assumptions.push_back("factor " + std::to_string(i) + " F_t-stability flag: " +
                            to_string(st) + " (user-supplied)");
    if (st == TriState::No) {
      v.status = Status::Unstable;
      v.witnesses.push_back(factor_witness(product, i, FunctionalId::Ft(t),
                                           "factor " + std::to_string(i) +
                                               " reported unstable for F_t"));
      return v;
    }
    if (st == TriState::Unknown) {
      v.status = Status::Indeterminate;
      v.assumptions.push_back("missing: factor " + std::to_string(i) + " F_t-stability fact");
      return v;
    }
  }

  const double t1 = -(n + 1.0) / (4.0 * n);
  const double t2 = -(9.0 * n * n - 20.0 * n - 28.0) / (4.0 * n * (8.0 * n - 7.0));
  const auto band = opts.marginal_band;

  const Check at_t1 = three_way(t, t1, band);
  if (at_t1 == Check::Boundary) {
    v.status = Status::Marginal;
    v.assumptions.push_back("t at the degeneracy boundary -(n+1)/(4n)");
    return v;
  }
  if (at_t1 == Check::Fail) {
    v.status = Status::Unstable;
    const double mu = product.factors[neg].mu_fn_effective().value_or(lam);
    v.witnesses.push_back(conformal_witness(product, neg, pos, mu, FunctionalId::Ft(t),
                                            "t <= -(n+1)/(4n): the conformal polynomial is "
                                            "negative for every eigenvalue"));
    return v;
  }

  if (n == 3) {
    v.status = Status::Stable;
    v.assumptions.push_back("n = 3 with t > -1/3: stable given stable factors");
    return v;
  }

  if (n <= 21 && three_way(t, t2, band) == Check::Fail) {
    // t1 < t < t2: negative discriminant, both polynomials positive
    v.status = Status::Stable;
    v.assumptions.push_back("discriminant D < 0: both conformal polynomials are positive");
    return v;
  }

  const auto co = ft_coefficients(n, t);
  const double D = std::max(co.D, 0.0);
  const double thr_neg = (-co.b0 + std::sqrt(D)) / (2.0 * co.a);  // tested against mu on the negative factor
  const double thr_pos = (co.b0 + std::sqrt(D)) / (2.0 * co.a);   // tested against mu on the positive factor

  bool boundary = false;
  std::vector<std::string> missing;

  // direction: function on the negative factor scaling the positive block
  {
    const auto mu = product.factors[neg].mu_fn_effective();
    if (!mu.has_value()) {
      missing.push_back("factor " + std::to_string(neg) + ": mu_fn required");
    } else {
      const double x = *mu / lam;
      const Check c = three_way(x, thr_neg, band);
      if (c == Check::Fail) {
        v.status = Status::Unstable;
        v.witnesses.push_back(conformal_witness(
            product, neg, pos, *mu, FunctionalId::Ft(t),
            "mu/lambda = " + fmt(x) + " below the conformal threshold " + fmt(thr_neg)));
        return v;
      }
      boundary = boundary || (c == Check::Boundary);
    }
  }
  // direction: function on the positive factor; nontrivial only when the
  // threshold exceeds the forced bound mu/lambda > 1
  if (thr_pos > 1.0) {
    const auto mu = product.factors[pos].mu_fn_effective();
    if (!mu.has_value()) {
      missing.push_back("factor " + std::to_string(pos) + ": mu_fn required");
    } else {
      const double x = *mu / lam;
      const Check c = three_way(x, thr_pos, band);
      if (c == Check::Fail) {
        v.status = Status::Unstable;
        v.witnesses.push_back(conformal_witness(
            product, pos, neg, *mu, FunctionalId::Ft(t),
            "mu/lambda = " + fmt(x) + " below the conformal threshold " + fmt(thr_pos)));
        return v;
      }
      boundary = boundary || (c == Check::Boundary);
    }
  } else {
    v.assumptions.push_back("positive-factor direction vacuous: threshold " + fmt(thr_pos) +
                            " <= 1 < mu/lambda");
  }

  if (!missing.empty()) {
    v.status = Status::Indeterminate;
    for (auto& m : missing) v.assumptions.push_back("missing: " + m);
    return v;
  }
  v.status = boundary ? Status::Marginal : Status::Stable;
  return v;
}

StabilityVerdict classify_r(const ProductSpace& product, const ClassifyOptions& opts) {
  StabilityVerdict v;
  if (product.factors.size() != 2) {
    v.status = Status::Indeterminate;
    return v;
  }
  const auto& f0 = product.factors[0];
  const auto& f1 = product.factors[1];
  if (!f0.is_space_form() || !f1.is_space_form() || f0.dim != f1.dim || f0.dim < 3) {
    v.status = Status::Indeterminate;
    v.assumptions.push_back("the R criterion covers equal-dimension space-form products only");
    return v;
  }
  const double K0 = f0.curvature().value(), K1 = f1.curvature().value();
  if (!(K0 > 0 && K1 < 0) && !(K0 < 0 && K1 > 0)) {
    v.status = Status::Indeterminate;
    v.assumptions.push_back("the R criterion needs one spherical and one hyperbolic factor");
    return v;
  }
  if (!close(std::abs(K0), std::abs(K1), opts.criticality_tol)) {
    v.status = Status::NotCritical;
    v.assumptions.push_back("curvatures are not balanced; not a critical point of R");
    return v;
  }
  const int n = f0.dim;
  const int neg = K0 < 0 ? 0 : 1;
  const int pos = 1 - neg;
  if (n <= 4) {
    v.status = Status::Stable;
    v.assumptions.push_back("n <= 4: stable for R without eigenvalue conditions");
    return v;
  }
  const double lam = std::abs(f0.lambda());
  const double thr = std::sqrt((n - 1.0) * (n - 4.0)) / (n - 1.0);  // on mu/|lambda|
  const auto mu = product.factors[neg].mu_fn_effective();
  v.assumptions.push_back("spherical factor eigenvalue never binds (mu/lambda = n/(n-1) above "
                          "the threshold)");
  if (!mu.has_value()) {
    v.status = Status::Indeterminate;
    v.assumptions.push_back("missing: hyperbolic factor mu_fn");
    return v;
  }
  const double x = *mu / lam;
  const Check c = three_way(x, thr, opts.marginal_band);
  ConformalScale dir{neg, pos, *mu};
  const double hval = hessian_conformal(FunctionalId::R(), product, dir).value;
  v.margin = hval;
  if (c == Check::Fail) {
    v.status = Status::Unstable;
    Witness w;
    w.direction = dir;
    w.value = hval;
    w.description = "eigenfunction on the hyperbolic factor: mu = " + fmt(*mu) +
                    " below sqrt((n-1)(n-4)) scaled threshold";
    v.witnesses.push_back(w);
    return v;
  }
  v.status = (c == Check::Boundary) ? Status::Marginal : Status::Stable;
  return v;
}

StabilityVerdict classify_weyl(const ProductSpace& product, const ClassifyOptions& opts) {
  StabilityVerdict v;
  if (product.factors.size() != 2) {
    v.status = Status::Indeterminate;
    return v;
  }
  const auto& f0 = product.factors[0];
  const auto& f1 = product.factors[1];
  if (!f0.is_space_form() || !f1.is_space_form()) {
    v.status = Status::Indeterminate;
    v.assumptions.push_back("the Weyl criteria cover space-form products only");
    return v;
  }
  if (f0.dim == 1 || f1.dim == 1) {
    v.status = Status::Indeterminate;
    v.assumptions.push_back("circle factor: the mixed TT form is positive but no theorem-level "
                            "verdict applies");
    return v;
  }
  const double K0 = f0.curvature().value(), K1 = f1.curvature().value();
  const bool opposite = (K0 > 0 && K1 < 0) || (K0 < 0 && K1 > 0);
  if (!opposite || !close(std::abs(K0), std::abs(K1), opts.criticality_tol) || f0.dim < 3 ||
      f1.dim < 3 || f0.dim + f1.dim < 6) {
    v.status = Status::Indeterminate;
    v.assumptions.push_back("covered case: sphere x hyperbolic space forms, both dims >= 3");
    return v;
  }
  v.status = Status::Stable;
  v.assumptions.push_back("conformally flat product: global minimum, positive TT Hessian");
  return v;
}

} // namespace

StabilityVerdict classify(const FunctionalId& functional_in, const ProductSpace& product,
                          const ClassifyOptions& opts) {
  product.validate();
  const FunctionalId functional = functional_in.normalized();
  switch (functional.kind) {
    case FunctionalId::Kind::Ric:
      return classify_ric(product, opts);
    case FunctionalId::Kind::Ft:
      return classify_ft(functional.t, product, opts);
    case FunctionalId::Kind::R:
      return classify_r(product, opts);
    case FunctionalId::Kind::W2:
    case FunctionalId::Kind::WnHalf:
      return classify_weyl(product, opts);
    case FunctionalId::Kind::S: {
      StabilityVerdict v;
      v.status = Status::Indeterminate;
      v.assumptions.push_back("no product criterion for the pure scalar functional");
      return v;
    }
  }
  StabilityVerdict v;
  return v;
}

std::vector<RegionRow> region_scan(const FunctionalId& functional, const RegionGrid& grid,
                                   const ClassifyOptions& opts) {
  std::vector<RegionRow> rows;

  auto run_point = [&](const ProductSpace& p, std::vector<std::pair<std::string, double>> params) {
    RegionRow row;
    row.params = std::move(params);
    try {
      row.status = to_string(classify(functional, p, opts).status);
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
    rows.push_back(std::move(row));
  };

  if (grid.family == "sphere_hyperbolic") {
    for (int n0 : grid.n0)
      for (int n1 : grid.n1)
        for (double ratio : grid.mu_over_lambda) {
          ProductSpace p;
          EinsteinFactor sphere;
          sphere.kind = FactorKind::Sphere;
          sphere.dim = n0;
          sphere.sectional = 1.0;
          sphere.einstein_const = n0 - 1.0;
          EinsteinFactor hyp;
          hyp.kind = FactorKind::SpaceForm;
          hyp.dim = n1;
          hyp.sectional = -(n0 - 1.0) / (n1 - 1.0);
          hyp.einstein_const = -(n0 - 1.0);
          hyp.mu_fn = ratio * (n0 - 1.0);
          p.factors = {sphere, hyp};
          run_point(p, {{"n0", double(n0)}, {"n1", double(n1)}, {"mu_over_lambda", ratio}});
        }
    return rows;
  }
  if (grid.family == "ft_opposite") {
    for (int n : grid.n0)
      for (double t : grid.t) {
        auto emit = [&](std::optional<double> r1, std::optional<double> r0) {
          ProductSpace p;
          EinsteinFactor a;
          a.kind = FactorKind::AbstractEinstein;
          a.dim = n;
          a.einstein_const = 1.0;
          a.ft_stable.all = TriState::Yes;
          if (r0) a.mu_fn = *r0;
          EinsteinFactor b;
          b.kind = FactorKind::AbstractEinstein;
          b.dim = n;
          b.einstein_const = -1.0;
          b.ft_stable.all = TriState::Yes;
          if (r1) b.mu_fn = *r1;
          p.factors = {a, b};
          std::vector<std::pair<std::string, double>> params{{"n", double(n)}, {"t", t}};
          if (r1) params.emplace_back("mu1_over_lambda", *r1);
          if (r0) params.emplace_back("mu0_over_lambda", *r0);
          run_point(p, std::move(params));
        };
        if (grid.mu_over_lambda.empty()) {
          emit(std::nullopt, std::nullopt);
        } else {
          for (double r1 : grid.mu_over_lambda) {
            if (grid.mu0_over_lambda.empty()) {
              emit(r1, std::nullopt);
            } else {
              for (double r0 : grid.mu0_over_lambda) emit(r1, r0);
            }
          }
        }
      }
    return rows;
  }
  throw ConfigError("grid.family", "unknown region family: " + grid.family);
}

namespace {

EinsteinFactor sphere_factor(int dim, double K) {
  EinsteinFactor f;
  f.kind = FactorKind::Sphere;
  f.dim = dim;
  f.sectional = K;
  f.einstein_const = (dim - 1.0) * K;
  return f;
}

EinsteinFactor hyperbolic_factor(int dim, double K, std::optional<double> mu) {
  EinsteinFactor f;
  f.kind = dim >= 2 && K == -1.0 ? FactorKind::HyperbolicQuotient : FactorKind::SpaceForm;
  f.sectional = K;
  f.dim = dim;
  f.einstein_const = (dim - 1.0) * K;
  f.mu_fn = mu;
  return f;
}

EinsteinFactor cp_factor(int complex_dim, double lambda) {
  EinsteinFactor f;
  f.kind = FactorKind::ComplexProjective;
  f.dim = 2 * complex_dim;
  f.einstein_const = lambda;
  return f;
}

} // namespace

std::vector<CatalogEntry> catalog() {
  std::vector<CatalogEntry> out;

  {
    CatalogEntry e;
    e.name = "sphere_products";
    e.predicate = "products of round spheres, all dims >= 3, common Einstein constant";
    e.functional = FunctionalId::Ric();
    e.expected = Status::Stable;
    e.samples.push_back({{sphere_factor(3, 1.0), sphere_factor(3, 1.0)}});
    e.samples.push_back({{sphere_factor(3, 1.0), sphere_factor(4, 2.0 / 3.0)}});
    e.samples.push_back(
        {{sphere_factor(3, 1.0), sphere_factor(4, 2.0 / 3.0), sphere_factor(5, 0.5)}});
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "complex_projective_products";
    e.predicate = "products of complex projective spaces, complex dims >= 2, common constant";
    e.functional = FunctionalId::Ric();
    e.expected = Status::Stable;
    e.samples.push_back({{cp_factor(2, 6.0), cp_factor(2, 6.0)}});
    e.samples.push_back({{cp_factor(2, 6.0), cp_factor(3, 6.0)}});
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "low_dim_hyperbolic_products";
    e.predicate = "products of compact hyperbolic factors of dimension 3 or 4 (pairs sampled)";
    e.functional = FunctionalId::Ric();
    e.expected = Status::Stable;
    e.samples.push_back(
        {{hyperbolic_factor(3, -1.0, std::nullopt), hyperbolic_factor(3, -1.0, std::nullopt)}});
    e.samples.push_back(
        {{hyperbolic_factor(3, -1.0, std::nullopt), hyperbolic_factor(4, -2.0 / 3.0, std::nullopt)}});
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "mixed_positive_products";
    e.predicate = "products of spheres and complex projective spaces with a common constant";
    e.functional = FunctionalId::Ric();
    e.expected = Status::Stable;
    e.samples.push_back({{sphere_factor(3, 3.0), cp_factor(2, 6.0)}});
    e.samples.push_back({{sphere_factor(3, 3.0), cp_factor(2, 6.0), sphere_factor(4, 2.0)}});
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "hyperbolic_pair_eigenvalue";
    e.predicate = "H^n x H^m (n,m >= 4): stable iff both eigenvalue ratios clear max{c(other), "
                  "2-8/own}";
    e.functional = FunctionalId::Ric();
    e.expected = Status::Stable;
    // dims (5,6): ratios 0.91 and 0.80 clear {c(6) ~ 0.756, 0.4} and {c(5) = 0.5, 2/3}
    e.samples.push_back({{hyperbolic_factor(5, -1.0, 4.0 * 0.91),
                          hyperbolic_factor(6, -0.8, 4.0 * 0.80)}});
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "sphere_hyperbolic_threshold";
    e.predicate = "S^n x H^m: stable iff mu/(m-1) clears max{2(m-4)/m, opposite-sign threshold}";
    e.functional = FunctionalId::Ric();
    e.expected = Status::Stable;
    e.samples.push_back({{sphere_factor(5, 1.0), hyperbolic_factor(5, -1.0, 10.0)}});
    e.samples.push_back({{sphere_factor(3, 1.0), hyperbolic_factor(4, -2.0 / 3.0, 1.0)}});
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "sphere_hyperbolic_sufficient";
    e.predicate = "S^n x H^m: stable whenever mu > 2(m-1)";
    e.functional = FunctionalId::Ric();
    e.expected = Status::Stable;
    e.samples.push_back({{sphere_factor(3, 1.0), hyperbolic_factor(7, -1.0 / 3.0, 2.0 * 2.2)}});
    e.samples.push_back({{sphere_factor(6, 1.0), hyperbolic_factor(5, -5.0 / 4.0, 5.0 * 2.1)}});
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "unstable_hyperbolic_pair";
    e.predicate = "H^n x H^m, both factors stable, one ratio inside (2-8/own, c(other))";
    e.functional = FunctionalId::Ric();
    e.expected = Status::Unstable;
    e.samples.push_back({{hyperbolic_factor(5, -1.0, 4.0 * 0.6),
                          hyperbolic_factor(6, -0.8, 4.0 * 0.80)}});
    out.push_back(e);
  }
  {
    CatalogEntry e;
    e.name = "unstable_sphere_hyperbolic";
    e.predicate = "S^n x H^m with the eigenvalue ratio inside the instability window";
    e.functional = FunctionalId::Ric();
    e.expected = Status::Unstable;
    e.samples.push_back({{sphere_factor(5, 1.0), hyperbolic_factor(5, -1.0, 4.0)}});
    out.push_back(e);
  }
  return out;
}

} // namespace curvstab
