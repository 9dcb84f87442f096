// Second, independent oracle for the mixed TT direction: S3 x S3 in Hopf
// coordinates with the explicit Killing co-frame perturbation, plus
// radius-swept Lie-model probes with non-critical corrections to pin the
// lambda-structure of the linearized terms.  Temporary adjudication code.
#include <cstdio>
#include <cmath>
#include <vector>

#include "curvstab/geometry.hpp"
#include "curvstab/jet.hpp"

using namespace curvstab;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Hopf chart product metric with mixed perturbation.
// coords: (eta, xi1, xi2, eta', xi1', xi2')
std::vector<std::vector<Jet2>> hopf_metric(const Eigen::VectorXd& p, double r0, double r1,
                                           double t, int flip1 = 0) {
  const int d = 6;
  std::vector<Jet2> x(d);
  for (int i = 0; i < d; ++i) x[i] = Jet2::variable(p(i), i, d);
  std::vector<std::vector<Jet2>> g(d, std::vector<Jet2>(d, Jet2(d)));

  const Jet2 c0 = cos(x[0]), s0 = sin(x[0]);
  const Jet2 c1 = cos(x[3]), s1 = sin(x[3]);
  g[0][0] = Jet2::constant(r0 * r0, d);
  g[1][1] = (c0 * c0) * (r0 * r0);
  g[2][2] = (s0 * s0) * (r0 * r0);
  g[3][3] = Jet2::constant(r1 * r1, d);
  g[4][4] = (c1 * c1) * (r1 * r1);
  g[5][5] = (s1 * s1) * (r1 * r1);

  const double a = 1.0 / std::sqrt(2.0 * kPi * kPi * r0 * r0 * r0);
  const double b = 1.0 / std::sqrt(2.0 * kPi * kPi * r1 * r1 * r1);
  // alpha0 = a r0 (cos^2 dxi1 + sin^2 dxi2), alpha1 likewise on the second factor
  Jet2 a0[2] = {(c0 * c0) * (a * r0), (s0 * s0) * (a * r0)};
  Jet2 a1[2] = {(c1 * c1) * (b * r1), (s1 * s1) * (b * r1) * (flip1 ? -1.0 : 1.0)};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Jet2 hij = a0[i] * a1[j] * t;
      g[1 + i][4 + j] = g[1 + i][4 + j] + hij;
      g[4 + j][1 + i] = g[4 + j][1 + i] + hij;
    }
  return g;
}

struct HopfIntegrals {
  double F_ric, F_s, F_riem, V;
};

HopfIntegrals hopf_integrals(double r0, double r1, double t, int n, int flip1 = 0) {
  std::vector<double> nod, wts;
  gauss_legendre(n, nod, wts);
  std::vector<double> eta(n), w(n);
  for (int i = 0; i < n; ++i) {
    eta[i] = 0.25 * kPi * (nod[i] + 1.0);
    w[i] = 0.25 * kPi * wts[i];
  }
  HopfIntegrals out{0, 0, 0, 0};
  Eigen::VectorXd p(6);
  p << 0, 1.0, 1.0, 0, 1.0, 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      p(0) = eta[i];
      p(3) = eta[j];
      // reuse the production curvature assembly on the jet metric
      // (chart path, via an ad-hoc bundle build)
      auto gj = hopf_metric(p, r0, r1, t, flip1);
      auto bundle = curvature_from_metric_jets(gj);
      auto inv = invariants(bundle);
      const double dens = std::sqrt(bundle.metric.determinant());
      const double ww = w[i] * w[j] * dens;
      out.F_ric += ww * inv.ric_sq;
      out.F_s += ww * inv.s * inv.s;
      out.F_riem += ww * inv.riem_sq;
      out.V += ww;
    }
  const double tau = std::pow(2.0 * kPi, 4.0);
  out.F_ric *= tau;
  out.F_s *= tau;
  out.F_riem *= tau;
  out.V *= tau;
  return out;
}

double second_derivative(const std::vector<double>& vals, double h) {
  // vals at {-2h,-h,-h/2,0,h/2,h,2h}
  const double dh = (-vals[6] + 16 * vals[5] - 30 * vals[3] + 16 * vals[1] - vals[0]) / (12 * h * h);
  const double dh2 =
      (-vals[5] + 16 * vals[4] - 30 * vals[3] + 16 * vals[2] - vals[1]) / (3 * h * h);
  return (16 * dh2 - dh) / 15.0;
}

} // namespace

int main() {
  const double r0 = 1.0, r1 = 1.0;
  const int N = 48;
  const double h = 0.05;
  const double ts[7] = {-2 * h, -h, -0.5 * h, 0, 0.5 * h, h, 2 * h};
  std::vector<double> psi_ric(7), psi_s(7), psi_riem(7);
  const double n = 6.0, kexp = (4.0 - n) / n;
  double V0 = hopf_integrals(r0, r1, 0.0, N).V;
  std::printf("V0 = %.10f vs %.10f\n", V0, std::pow(2 * kPi * kPi, 2));
  for (int i = 0; i < 7; ++i) {
    auto I = hopf_integrals(r0, r1, ts[i], N);
    const double u = std::pow(I.V / V0, kexp);
    psi_ric[i] = u * I.F_ric;
    psi_s[i] = u * I.F_s;
    psi_riem[i] = u * I.F_riem;
  }
  std::printf("Hopf-chart mixed FD: Ric=%.6f S=%.6f R=%.6f\n", second_derivative(psi_ric, h),
              second_derivative(psi_s, h), second_derivative(psi_riem, h));

  // same-orientation vs opposite-orientation Killing pair
  for (int i = 0; i < 7; ++i) {
    auto I = hopf_integrals(r0, r1, ts[i], N, 1);
    const double u = std::pow(I.V / V0, kexp);
    psi_ric[i] = u * I.F_ric;
    psi_s[i] = u * I.F_s;
    psi_riem[i] = u * I.F_riem;
  }
  std::printf("Hopf-chart mixed FD (anti-oriented alpha1): Ric=%.6f S=%.6f R=%.6f\n",
              second_derivative(psi_ric, h), second_derivative(psi_s, h),
              second_derivative(psi_riem, h));

  // --- radius-swept Lie probes with non-critical corrections ---
  struct Probe { double r0, r1; };
  for (auto pr : {Probe{1.0, 1.0}, Probe{1.0, 1.3}, Probe{1.3, 1.0}, Probe{1.0, 1.7}, Probe{1.44, 1.0}}) {
    LieGroupProductModel lie{pr.r0, pr.r1, true};
    FdOptions o;
    o.check_critical = false;
    const double lam0 = 2.0 / (pr.r0 * pr.r0), lam1 = 2.0 / (pr.r1 * pr.r1);
    const double nu0 = 2 * lam0, nu1 = 2 * lam1;
    const double dd0 = nu0 * nu0, dd1 = nu1 * nu1;
    const double K0 = 0.5 * lam0, K1 = 0.5 * lam1;
    const double r2 = 3 * lam0 * lam0 + 3 * lam1 * lam1;     // |r|^2
    const double R2 = 12 * K0 * K0 + 12 * K1 * K1;           // |R|^2
    const double s = 3 * (lam0 + lam1);
    const double d_ric = -(8.0 / n) * r2 + 4.0 * (lam0 * lam0 + lam1 * lam1);
    const double d_r = -(8.0 / n) * R2 + 8.0 * (2 * K0 * K0 + 2 * K1 * K1);
    const double d_s = -(8.0 / n) * s * s + 4.0 * s * (lam0 + lam1);

    const double fd_ric = fd_second_variation(FunctionalId::Ric(), lie, o).value;
    const double fd_s = fd_second_variation(FunctionalId::S(), lie, o).value;
    const double fd_r = fd_second_variation(FunctionalId::R(), lie, o).value;
    const double t4 = rcheck_pairing_fd(lie).value;

    const double pair_ric = fd_ric - d_ric;
    const double pair_s = fd_s - d_s;
    const double pair_r = fd_r - d_r;
    const double scal1 = (4.0 / n) * s * s - 2.0 * s * (nu0 + nu1);

    const double T1 = 0.5 * (pair_r - (4.0 / n) * R2) + t4;
    const double T23 = T1 + (4.0 / n) * r2 - pair_ric;
    std::printf("probe (%g,%g): pair_s=%.6f scal1=%.6f | T4=%.6f | T1=%.6f T1-lead=%.6f | T23=%.6f T23-lead=%.6f\n",
                pr.r0, pr.r1, pair_s, scal1, t4,
                T1, T1 - (2 * (dd0 + dd1) + 4 * nu0 * nu1),
                T23, T23 - (dd0 + dd1 + 2 * nu0 * nu1));
  }
  return 0;
}
