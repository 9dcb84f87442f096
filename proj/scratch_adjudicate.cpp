// Temporary oracle-adjudication run; deleted once the numbers are frozen.
#include <cstdio>

#include "curvstab/geometry.hpp"
#include "curvstab/spectral.hpp"

using namespace curvstab;

int main() {
  // Convention locks
  {
    ProductChartModel s3{{{ChartFactor::Kind::Sphere, 3, 1.0}, {ChartFactor::Kind::Sphere, 3, 1.0}}};
    auto b = curvature_at(s3, random_chart_point(s3, 1));
    auto inv = invariants(b);
    std::printf("S3xS3 chart: s=%.12f ric2=%.12f riem2=%.12f weyl2=%.12f\n", inv.s, inv.ric_sq,
                inv.riem_sq, inv.weyl_sq);
  }
  {
    ProductChartModel m{{{ChartFactor::Kind::Sphere, 3, 1.0}, {ChartFactor::Kind::Hyperbolic, 3, 1.0}}};
    auto inv = invariants(curvature_at(m, random_chart_point(m, 7)));
    std::printf("S3xH3 chart: s=%.12f ric2=%.12f riem2=%.12f weyl2=%.12g\n", inv.s, inv.ric_sq,
                inv.riem_sq, inv.weyl_sq);
  }
  {
    LieGroupProductModel lie{1.0, 1.0, true};
    auto inv = invariants(curvature_at(lie, Eigen::VectorXd(), 0.0));
    std::printf("Lie S3xS3: s=%.12f ric2=%.12f riem2=%.12f weyl2=%.12f\n", inv.s, inv.ric_sq,
                inv.riem_sq, inv.weyl_sq);
  }

  // FD conformal at unit S3 x S3
  ProductSpheresModel conf{{{3, 1.0}, {3, 1.0}}, ConformalPerturbation{0, 1, 1}};
  for (auto f : {FunctionalId::Ric(), FunctionalId::S(), FunctionalId::Ft(1.0), FunctionalId::R()}) {
    auto r = fd_second_variation(f, conf);
    std::printf("conf %-6s: value=%.8f err=%.3e first=%.3e\n", f.name().c_str(), r.value,
                r.error_estimate, r.first_derivative);
  }

  // FD mixed TT at unit S3 x S3 (Lie model)
  LieGroupProductModel lie{1.0, 1.0, true};
  for (auto f : {FunctionalId::Ric(), FunctionalId::S(), FunctionalId::Ft(1.0), FunctionalId::R()}) {
    auto r = fd_second_variation(f, lie);
    std::printf("mixed %-6s: value=%.8f err=%.3e first=%.3e\n", f.name().c_str(), r.value,
                r.error_estimate, r.first_derivative);
  }

  // Pointwise checked-curvature linearization, three radius pairs
  for (auto [r0, r1] : {std::pair{1.0, 1.0}, std::pair{1.0, 1.3}, std::pair{1.7, 1.0}}) {
    LieGroupProductModel m{r0, r1, true};
    auto r = rcheck_pairing_fd(m);
    const double lam0 = 2.0 / (r0 * r0), lam1 = 2.0 / (r1 * r1);
    const double nu0 = 4.0 / (r0 * r0), nu1 = 4.0 / (r1 * r1);
    const double pred = detail::rcheck_generic(1.0 / (r0 * r0), 1.0 / (r1 * r1), lam0, lam1, nu0, nu1);
    std::printf("rcheck (%g,%g): fd=%.10f pred=%.10f err=%.3e\n", r0, r1, r.value, pred,
                r.error_estimate);
  }

  // closed-form predictions for comparison
  EinsteinFactor s3{FactorKind::Sphere, 3, 2.0, 1.0, 3.0, {}, TriState::Yes, {}};
  ProductSpace p{{s3, s3}};
  std::printf("pred conf Ric=%g S=%g Ft(1)=%g\n",
              hessian_conformal(FunctionalId::Ric(), p, {0, 1, 3.0}).value,
              hessian_conformal(FunctionalId::S(), p, {0, 1, 3.0}).value,
              hessian_conformal(FunctionalId::Ft(1.0), p, {0, 1, 3.0}).value);
  std::printf("pred conf R(assembly)=%g\n", detail::conformal_r_assembly(p, {0, 1, 3.0}));
  MixedTT mt{4.0, 4.0, {}, {}};
  std::printf("pred mixed Ric=%g S=%g R=%g W2=%g\n",
              hessian_mixed_tt(FunctionalId::Ric(), p, mt).value,
              hessian_mixed_tt(FunctionalId::S(), p, mt).value,
              hessian_mixed_tt(FunctionalId::R(), p, mt).value,
              hessian_mixed_tt(FunctionalId::W2(), p, mt).value);
  return 0;
}
