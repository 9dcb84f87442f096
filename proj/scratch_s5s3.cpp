// Third adjudication probe: S5(sqrt 2) x S3(1), a balanced Einstein product
// with lambda = 2 on both factors, mixed TT direction built from the Reeb
// Killing form on S5 and a Hopf Killing form on S3.  Separates curvature-
// scaling from Einstein-constant scaling in the linearized terms.
#include <cstdio>
#include <cmath>
#include <vector>

#include "curvstab/geometry.hpp"
#include "curvstab/jet.hpp"

using namespace curvstab;

namespace {
constexpr double kPi = 3.14159265358979323846;

// coords: (t1, t2, x1, x2, x3 | e, y1, y2)  -- S5 sector angles + fibers, S3 Hopf
std::vector<std::vector<Jet2>> metric(const Eigen::VectorXd& p, double r0, double r1, double t) {
  const int d = 8;
  std::vector<Jet2> x(d);
  for (int i = 0; i < d; ++i) x[i] = Jet2::variable(p(i), i, d);
  std::vector<std::vector<Jet2>> g(d, std::vector<Jet2>(d, Jet2(d)));

  const Jet2 c1 = cos(x[0]), s1 = sin(x[0]);
  const Jet2 c2 = cos(x[1]), s2 = sin(x[1]);
  // S5 block
  g[0][0] = Jet2::constant(r0 * r0, d);
  g[1][1] = (s1 * s1) * (r0 * r0);
  const Jet2 rho1 = c1 * c1;            // rho_j^2
  const Jet2 rho2 = (s1 * c2) * (s1 * c2);
  const Jet2 rho3 = (s1 * s2) * (s1 * s2);
  g[2][2] = rho1 * (r0 * r0);
  g[3][3] = rho2 * (r0 * r0);
  g[4][4] = rho3 * (r0 * r0);
  // S3 block (Hopf)
  const Jet2 ce = cos(x[5]), se = sin(x[5]);
  g[5][5] = Jet2::constant(r1 * r1, d);
  g[6][6] = (ce * ce) * (r1 * r1);
  g[7][7] = (se * se) * (r1 * r1);

  const double V0 = std::pow(kPi, 3) * std::pow(r0, 5);
  const double V1 = 2.0 * kPi * kPi * std::pow(r1, 3);
  const double a = 1.0 / std::sqrt(V0), b = 1.0 / std::sqrt(V1);
  // unit-norm Killing co-frames
  Jet2 a0[3] = {rho1 * (a * r0), rho2 * (a * r0), rho3 * (a * r0)};
  Jet2 a1[2] = {(ce * ce) * (b * r1), (se * se) * (b * r1)};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) {
      const Jet2 hij = a0[i] * a1[j] * t;
      g[2 + i][6 + j] = g[2 + i][6 + j] + hij;
      g[6 + j][2 + i] = g[6 + j][2 + i] + hij;
    }
  return g;
}

struct Integrals { double ric, s2, riem, vol, rcheck_pair; };

Integrals integrate(double r0, double r1, double t, int n, bool with_rcheck, double rstep) {
  std::vector<double> nod, wts;
  gauss_legendre(n, nod, wts);
  std::vector<double> ang(n), w(n);
  for (int i = 0; i < n; ++i) {
    ang[i] = 0.25 * kPi * (nod[i] + 1.0);
    w[i] = 0.25 * kPi * wts[i];
  }
  Integrals out{0, 0, 0, 0, 0};
  Eigen::VectorXd p(8);
  p << 0, 0, 1.0, 1.0, 1.0, 0, 1.0, 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        p(0) = ang[i];
        p(1) = ang[j];
        p(5) = ang[k];
        auto bundle = curvature_from_metric_jets(metric(p, r0, r1, t));
        auto inv = invariants(bundle);
        const double dens = std::sqrt(bundle.metric.determinant());
        const double ww = w[i] * w[j] * w[k] * dens;
        out.ric += ww * inv.ric_sq;
        out.s2 += ww * inv.s * inv.s;
        out.riem += ww * inv.riem_sq;
        out.vol += ww;
        if (with_rcheck) {
          // d/dt Rcheck paired with h, with indices raised by g(0)
          auto rcm = rcheck_tensor(curvature_from_metric_jets(metric(p, r0, r1, -rstep)));
          auto rcp = rcheck_tensor(curvature_from_metric_jets(metric(p, r0, r1, rstep)));
          auto rcm2 = rcheck_tensor(curvature_from_metric_jets(metric(p, r0, r1, -2 * rstep)));
          auto rcp2 = rcheck_tensor(curvature_from_metric_jets(metric(p, r0, r1, 2 * rstep)));
          Eigen::MatrixXd drc = (rcm2 - 8.0 * rcm + 8.0 * rcp - rcp2) / (12.0 * rstep);
          auto b0 = curvature_from_metric_jets(metric(p, r0, r1, 0.0));
          auto b1 = curvature_from_metric_jets(metric(p, r0, r1, 1.0));
          Eigen::MatrixXd dh = b1.metric - b0.metric;  // g_t is linear in t
          out.rcheck_pair += w[i] * w[j] * w[k] * std::sqrt(b0.metric.determinant()) *
                             (b0.metric_inv * drc * b0.metric_inv * dh).trace();
        }
      }
  const double tau = std::pow(2.0 * kPi, 5);
  out.ric *= tau; out.s2 *= tau; out.riem *= tau; out.vol *= tau; out.rcheck_pair *= tau;
  return out;
}

} // namespace

int main() {
  const double r0 = std::sqrt(2.0), r1 = 1.0;
  const int N = 24;
  const double n = 8.0, kexp = (4.0 - n) / n;
  const double h = 0.05;
  const double ts[7] = {-2 * h, -h, -0.5 * h, 0, 0.5 * h, h, 2 * h};
  std::vector<double> P_ric(7), P_s(7), P_riem(7);
  const double V0 = integrate(r0, r1, 0.0, N, false, 0).vol;
  std::printf("V0=%.8f expect %.8f\n", V0, std::pow(kPi, 3) * std::pow(r0, 5) * 2 * kPi * kPi);
  for (int i = 0; i < 7; ++i) {
    auto I = integrate(r0, r1, ts[i], N, false, 0);
    const double u = std::pow(I.vol / V0, kexp);
    P_ric[i] = u * I.ric;
    P_s[i] = u * I.s2;
    P_riem[i] = u * I.riem;
  }
  auto second = [&](const std::vector<double>& v) {
    const double dh = (-v[6] + 16 * v[5] - 30 * v[3] + 16 * v[1] - v[0]) / (12 * h * h);
    const double dh2 = (-v[5] + 16 * v[4] - 30 * v[3] + 16 * v[2] - v[1]) / (3 * h * h);
    return (16 * dh2 - dh) / 15.0;
  };
  std::printf("S5xS3 mixed FD: Ric=%.6f S=%.6f R=%.6f\n", second(P_ric), second(P_s), second(P_riem));

  auto I = integrate(r0, r1, 0.0, N, true, 0.02);
  std::printf("S5xS3 rcheck pairing: %.6f  (cand: lam*nu=16, 2K*nu=12)\n", I.rcheck_pair);
  return 0;
}
