#include "curvstab/types.hpp"

#include <cmath>
#include <numeric>

namespace curvstab {

std::string to_string(FactorKind k) {
  switch (k) {
    case FactorKind::Sphere: return "Sphere";
    case FactorKind::HyperbolicQuotient: return "HyperbolicQuotient";
    case FactorKind::ComplexProjective: return "ComplexProjective";
    case FactorKind::AbstractEinstein: return "AbstractEinstein";
    case FactorKind::SpaceForm: return "SpaceForm";
  }
  return "?";
}

std::string to_string(TriState s) {
  switch (s) {
    case TriState::Yes: return "yes";
    case TriState::No: return "no";
    case TriState::Unknown: return "unknown";
  }
  return "?";
}

FactorKind factor_kind_from_string(const std::string& s) {
  if (s == "Sphere") return FactorKind::Sphere;
  if (s == "HyperbolicQuotient") return FactorKind::HyperbolicQuotient;
  if (s == "ComplexProjective") return FactorKind::ComplexProjective;
  if (s == "AbstractEinstein") return FactorKind::AbstractEinstein;
  if (s == "SpaceForm") return FactorKind::SpaceForm;
  throw InvalidSpectralData("unknown factor kind: " + s);
}

TriState tri_state_from_string(const std::string& s) {
  if (s == "yes") return TriState::Yes;
  if (s == "no") return TriState::No;
  if (s == "unknown") return TriState::Unknown;
  throw InvalidSpectralData("unknown tri-state: " + s);
}

TriState FtStabilityFacts::at(double t, double tol) const {
  for (const auto& [key, state] : entries) {
    if (std::abs(key - t) <= tol * std::max(1.0, std::abs(key))) return state;
  }
  if (all.has_value()) return *all;
  return TriState::Unknown;
}

std::optional<double> EinsteinFactor::curvature() const {
  if (sectional.has_value()) return sectional;
  if (dim >= 2 &&
      (kind == FactorKind::Sphere || kind == FactorKind::SpaceForm ||
       kind == FactorKind::HyperbolicQuotient)) {
    return einstein_const / (dim - 1);
  }
  if (dim == 1) return 0.0;  // circles are flat
  return std::nullopt;
}

std::optional<double> EinsteinFactor::mu_fn_effective() const {
  if (mu_fn.has_value()) return mu_fn;
  if (kind == FactorKind::Sphere && dim >= 2) {
    if (auto K = curvature()) return dim * (*K);
  }
  return std::nullopt;
}

bool EinsteinFactor::is_space_form() const {
  return kind == FactorKind::Sphere || kind == FactorKind::SpaceForm ||
         kind == FactorKind::HyperbolicQuotient || dim == 1;
}

namespace {
bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}
} // namespace

void EinsteinFactor::validate(double tol) const {
  if (dim < 1) throw InvalidSpectralData("factor dim must be >= 1");
  const double lam = einstein_const;

  if (dim == 1 && std::abs(lam) > tol)
    throw InvalidSpectralData("one-dimensional factors have einstein_const 0");

  switch (kind) {
    case FactorKind::Sphere: {
      if (dim >= 2) {
        if (!sectional.has_value())
          break;  // K derived from lambda; require lambda > 0 below
        if (*sectional <= 0.0) throw InvalidSpectralData("Sphere requires K > 0");
        if (!close(lam, (dim - 1) * (*sectional), tol))
          throw InvalidSpectralData("Sphere requires lambda = (n-1)K");
      }
      break;
    }
    case FactorKind::SpaceForm: {
      if (dim >= 2) {
        if (!sectional.has_value())
          throw InvalidSpectralData("SpaceForm requires sectional curvature");
        if (!close(lam, (dim - 1) * (*sectional), tol))
          throw InvalidSpectralData("SpaceForm requires lambda = (n-1)K");
      }
      break;
    }
    case FactorKind::HyperbolicQuotient: {
      if (lam >= 0.0) throw InvalidSpectralData("HyperbolicQuotient requires lambda < 0");
      if (sectional.has_value()) {
        if (*sectional >= 0.0)
          throw InvalidSpectralData("HyperbolicQuotient requires K < 0");
        if (!close(lam, (dim - 1) * (*sectional), tol))
          throw InvalidSpectralData("HyperbolicQuotient requires lambda = (n-1)K");
      }
      break;
    }
    case FactorKind::ComplexProjective: {
      if (dim < 4 || dim % 2 != 0)
        throw InvalidSpectralData("ComplexProjective requires even real dim >= 4");
      if (lam <= 0.0)
        throw InvalidSpectralData("ComplexProjective requires lambda > 0");
      break;
    }
    case FactorKind::AbstractEinstein:
      break;
  }

  if (kind == FactorKind::Sphere && dim >= 2 && lam <= 0.0)
    throw InvalidSpectralData("Sphere requires lambda > 0");

  // Lichnerowicz bound on functions.
  if (lam > 0.0 && dim >= 2) {
    if (auto mu = mu_fn_effective()) {
      const double bound = dim * lam / (dim - 1);
      if (*mu < bound - tol * std::max(1.0, bound))
        throw InvalidSpectralData("mu_fn violates the Lichnerowicz bound n*lambda/(n-1)");
    }
  }
  if (kind == FactorKind::Sphere && dim >= 2 && mu_fn.has_value()) {
    if (auto K = curvature()) {
      if (!close(*mu_fn, dim * (*K), tol))
        throw InvalidSpectralData("Sphere requires mu_fn = n*K");
    }
  }

  // Spectral bound for co-closed 1-forms on positive Einstein factors.
  if (lam > 0.0 && mu_oneform.has_value()) {
    if (*mu_oneform < lam - tol * std::max(1.0, lam))
      throw InvalidSpectralData("mu_oneform violates the one-form spectral bound >= lambda");
  }
  if (mu_oneform.has_value() && *mu_oneform < 0.0)
    throw InvalidSpectralData("mu_oneform must be nonnegative");
  if (mu_fn.has_value() && *mu_fn <= 0.0)
    throw InvalidSpectralData("mu_fn must be positive");
}

int ProductSpace::total_dim() const {
  int n = 0;
  for (const auto& f : factors) n += f.dim;
  return n;
}

void ProductSpace::validate(double tol) const {
  if (factors.size() < 2)
    throw InvalidSpectralData("a product needs at least two factors");
  for (const auto& f : factors) f.validate(tol);
}

bool ProductSpace::ric_critical(double tol) const {
  if (factors.size() != 2) {
    // multi-factor products: all |lambda_i| equal
    const double ref = std::abs(factors[0].lambda());
    for (const auto& f : factors)
      if (!close(std::abs(f.lambda()), ref, tol)) return false;
    return true;
  }
  return close(std::abs(factors[0].lambda()), std::abs(factors[1].lambda()), tol);
}

bool ProductSpace::ft_critical(double tol) const {
  if (factors.size() != 2) return false;
  const double l0 = factors[0].lambda(), l1 = factors[1].lambda();
  if (close(l0, l1, tol)) return true;
  return close(l0, -l1, tol) && factors[0].dim == factors[1].dim;
}

double ProductSpace::ricci_norm_sq() const {
  double v = 0.0;
  for (const auto& f : factors) v += f.dim * f.lambda() * f.lambda();
  return v;
}

double ProductSpace::scalar() const {
  double v = 0.0;
  for (const auto& f : factors) v += f.dim * f.lambda();
  return v;
}

void validate_direction(const ProductSpace& product, const VariationDirection& dir,
                        const ValidationOptions& opts) {
  const double tol = opts.tol;
  if (const auto* c = std::get_if<ConformalScale>(&dir)) {
    const int nf = static_cast<int>(product.factors.size());
    if (c->source_factor < 0 || c->source_factor >= nf ||
        c->target_factor < 0 || c->target_factor >= nf)
      throw InvalidSpectralData("ConformalScale factor index out of range");
    if (c->source_factor == c->target_factor)
      throw InvalidSpectralData("ConformalScale requires distinct source and target factors");
    if (!(c->mu > 0.0)) throw InvalidSpectralData("ConformalScale requires mu > 0");
    return;
  }
  if (const auto* m = std::get_if<MixedTT>(&dir)) {
    if (product.factors.size() != 2)
      throw InvalidSpectralData("MixedTT directions need a two-factor product");
    const double nu[2] = {m->nu0, m->nu1};
    const double lap[2] = {m->lap_sq0(), m->lap_sq1()};
    for (int i = 0; i < 2; ++i) {
      if (nu[i] < -tol) throw InvalidSpectralData("MixedTT requires nu_i >= 0");
      const double lam = product.factors[i].lambda();
      if (lam > 0.0) {
        if (nu[i] < lam - tol * std::max(1.0, lam))
          throw InvalidSpectralData("MixedTT violates the one-form spectral bound nu_i >= lambda_i");
        if (opts.strict_bochner && nu[i] <= lam + tol * std::max(1.0, lam))
          throw InvalidSpectralData("MixedTT at the exact one-form spectral boundary nu_i = lambda_i");
      }
      if (lap[i] < nu[i] * nu[i] - tol * std::max(1.0, nu[i] * nu[i]))
        throw InvalidSpectralData("norm_laplacian_sq_i below nu_i^2 violates Cauchy-Schwarz");
    }
    return;
  }
  if (const auto* f = std::get_if<FactorTT>(&dir)) {
    if (f->factor < 0 || f->factor >= static_cast<int>(product.factors.size()))
      throw InvalidSpectralData("FactorTT factor index out of range");
    return;
  }
}

std::string FunctionalId::name() const {
  switch (kind) {
    case Kind::Ric: return "Ric";
    case Kind::S: return "S";
    case Kind::Ft: return "Ft";
    case Kind::R: return "R";
    case Kind::W2: return "W2";
    case Kind::WnHalf: return "WnHalf";
  }
  return "?";
}

double QuadraticFormReport::term_sum() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.value;
  return s;
}

} // namespace curvstab
