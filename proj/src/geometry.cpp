#include "curvstab/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <random>

#include "curvstab/jet.hpp"

namespace curvstab {

namespace {

constexpr double kPi = 3.14159265358979323846;

int levi_civita3(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  if ((i + 1) % 3 == j) return 1;  // even permutation of (0,1,2)
  return -1;
}

} // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

double unit_sphere_volume(int k) {
  return 2.0 * std::pow(kPi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

double zonal_eigenvalue(int dim, double radius, int k) {
  return k * (k + dim - 1.0) / (radius * radius);
}

namespace {

// Gegenbauer polynomial C_k^(alpha)(x) by recurrence; zonal harmonics on a
// round sphere of dimension d are C_k^((d-1)/2)(cos theta).
template <typename T>
T gegenbauer(int k, double alpha, const T& x) {
  if (k == 0) return x * 0.0 + 1.0;
  T cm1 = x * 0.0 + 1.0;
  T c = x * (2.0 * alpha);
  for (int j = 2; j <= k; ++j) {
    T next = (x * c * (2.0 * (j + alpha - 1.0)) - cm1 * (j + 2.0 * alpha - 2.0)) * (1.0 / j);
    cm1 = c;
    c = next;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Metric jets for chart models.

using MetricJets = std::vector<std::vector<Jet2>>;

struct ChartLayout {
  struct Block {
    ChartFactor::Kind kind;
    int dim;
    double radius;
    int offset;
  };
  std::vector<Block> blocks;
  int total = 0;
};

ChartLayout layout_of(const std::vector<ChartFactor>& factors) {
  ChartLayout lay;
  int off = 0;
  for (const auto& f : factors) {
    lay.blocks.push_back({f.kind, f.dim, f.radius, off});
    off += f.dim;
  }
  lay.total = off;
  return lay;
}

void fill_sphere_block(MetricJets& g, const std::vector<Jet2>& x, int offset, int dim,
                       double radius, const Jet2& conformal) {
  Jet2 prod = Jet2::constant(radius * radius, static_cast<int>(x.size()));
  for (int j = 0; j < dim; ++j) {
    g[offset + j][offset + j] = prod * conformal;
    if (j + 1 < dim) {
      const Jet2 s = sin(x[offset + j]);
      prod = prod * s * s;
    }
  }
}

void fill_hyperbolic_block(MetricJets& g, const std::vector<Jet2>& x, int offset, int dim,
                           double radius, const Jet2& conformal) {
  const int d = static_cast<int>(x.size());
  Jet2 r2 = Jet2::constant(0.0, d);
  for (int j = 0; j < dim; ++j) r2 = r2 + x[offset + j] * x[offset + j];
  const Jet2 w = 1.0 - r2;
  const Jet2 factor = (4.0 * radius * radius) / (w * w);
  for (int j = 0; j < dim; ++j) g[offset + j][offset + j] = factor * conformal;
}

// ---------------------------------------------------------------------------
// Curvature from order-2 metric jets, all assembly in plain doubles.

CurvatureBundle curvature_from_jets(const MetricJets& gj) {
  const int d = static_cast<int>(gj.size());
  CurvatureBundle b;
  b.dim = d;
  b.metric.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b.metric(i, j) = gj[i][j].v;

  Eigen::LLT<Eigen::MatrixXd> llt(b.metric);
  if (llt.info() != Eigen::Success)
    throw DegenerateMetric("metric is not positive definite at the evaluation point");
  b.metric_inv = llt.solve(Eigen::MatrixXd::Identity(d, d));

  // dg[m](i,j) = d_m g_ij ; d2g[m][p](i,j) = d_m d_p g_ij
  std::vector<Eigen::MatrixXd> dg(d, Eigen::MatrixXd::Zero(d, d));
  std::vector<std::vector<Eigen::MatrixXd>> d2g(
      d, std::vector<Eigen::MatrixXd>(d, Eigen::MatrixXd::Zero(d, d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      for (int m = 0; m < d; ++m) {
        dg[m](i, j) = gj[i][j].g(m);
        for (int p = 0; p < d; ++p) d2g[m][p](i, j) = gj[i][j].h(m, p);
      }
    }

  auto idx3 = [d](int a, int bq, int c) { return (a * d + bq) * d + c; };
  std::vector<double> gamma_low(d * d * d), gamma(d * d * d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        gamma_low[idx3(k, i, j)] = 0.5 * (dg[i](j, k) + dg[j](i, k) - dg[k](i, j));
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double v = 0.0;
        for (int k = 0; k < d; ++k) v += b.metric_inv(l, k) * gamma_low[idx3(k, i, j)];
        gamma[idx3(l, i, j)] = v;
      }

  // d_m Gamma^l_ij
  std::vector<Eigen::MatrixXd> dginv(d);
  for (int m = 0; m < d; ++m) dginv[m] = -b.metric_inv * dg[m] * b.metric_inv;
  std::vector<double> dgamma(d * d * d * d);
  auto idx4 = [d](int a, int bq, int c, int e) { return ((a * d + bq) * d + c) * d + e; };
  for (int m = 0; m < d; ++m)
    for (int l = 0; l < d; ++l)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double v = 0.0;
          for (int k = 0; k < d; ++k) {
            const double dlow =
                0.5 * (d2g[m][i](j, k) + d2g[m][j](i, k) - d2g[m][k](i, j));
            v += dginv[m](l, k) * gamma_low[idx3(k, i, j)] + b.metric_inv(l, k) * dlow;
          }
          dgamma[idx4(m, l, i, j)] = v;
        }

  // R^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^l_ia Gamma^a_jk - Gamma^l_ja Gamma^a_ik
  std::vector<double> riem_up(d * d * d * d);
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          double v = dgamma[idx4(i, l, j, k)] - dgamma[idx4(j, l, i, k)];
          for (int a = 0; a < d; ++a)
            v += gamma[idx3(l, i, a)] * gamma[idx3(a, j, k)] -
                 gamma[idx3(l, j, a)] * gamma[idx3(a, i, k)];
          riem_up[idx4(l, i, j, k)] = v;
        }

  b.riemann.assign(static_cast<size_t>(d) * d * d * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double v = 0.0;
          for (int m = 0; m < d; ++m) v += b.metric(l, m) * riem_up[idx4(m, i, j, k)];
          b.riemann[idx4(i, j, k, l)] = v;
        }

  b.ricci = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      double v = 0.0;
      for (int i = 0; i < d; ++i) v += riem_up[idx4(i, i, j, k)];
      b.ricci(j, k) = v;
    }
  b.scalar = (b.metric_inv * b.ricci).trace();
  return b;
}

// ---------------------------------------------------------------------------
// Chart models.

struct SphereModelContext {
  ChartLayout lay;
  int src = 0;   // factor whose polar angle carries the conformal profile
  int tgt = 1;
  int harmonic = 1;
  bool perturbed = false;
  double norm_coeff = 1.0;  // f_hat = norm_coeff * Z_k(cos theta)
};

ChartLayout spheres_layout(const ProductSpheresModel& m) {
  std::vector<ChartFactor> fs;
  for (const auto& f : m.factors) fs.push_back({ChartFactor::Kind::Sphere, f.dim, f.radius});
  return layout_of(fs);
}

Jet2 zonal_profile_jet(const Jet2& theta, int dim, int k) {
  const double alpha = 0.5 * (dim - 1);
  return gegenbauer(k, alpha, cos(theta));
}

double zonal_profile(double theta, int dim, int k) {
  const double alpha = 0.5 * (dim - 1);
  return gegenbauer(k, alpha, std::cos(theta));
}

MetricJets chart_metric_jets(const ChartLayout& lay, const Eigen::VectorXd& point,
                             const SphereModelContext* ctx, double amplitude) {
  const int d = lay.total;
  std::vector<Jet2> x(d);
  for (int i = 0; i < d; ++i) x[i] = Jet2::variable(point(i), i, d);
  MetricJets g(d, std::vector<Jet2>(d, Jet2(d)));

  Jet2 one = Jet2::constant(1.0, d);
  for (size_t bi = 0; bi < lay.blocks.size(); ++bi) {
    const auto& blk = lay.blocks[bi];
    Jet2 conf = one;
    if (ctx && ctx->perturbed && static_cast<int>(bi) == ctx->tgt && amplitude != 0.0) {
      const auto& sblk = lay.blocks[ctx->src];
      const Jet2 prof = zonal_profile_jet(x[sblk.offset], sblk.dim, ctx->harmonic);
      conf = one + prof * (amplitude * ctx->norm_coeff);
    }
    if (blk.kind == ChartFactor::Kind::Sphere)
      fill_sphere_block(g, x, blk.offset, blk.dim, blk.radius, conf);
    else
      fill_hyperbolic_block(g, x, blk.offset, blk.dim, blk.radius, conf);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Lie-group model: bi-invariant product of two round 3-spheres with an
// optional constant mixed TT perturbation.

struct LieData {
  Eigen::MatrixXd g;
  std::vector<double> structure;  // C[a][b][c], [e_a, e_b] = C[a][b][c] e_c
  double volume0 = 0.0;           // unperturbed volume
  double ab = 0.0;                // product of co-frame normalizations
};

LieData lie_data(const LieGroupProductModel& m, double amplitude) {
  if (m.dim1 != 3 && m.dim1 != 1)
    throw UnsupportedCombination("the Lie-group model supports a 3-sphere or circle second factor");
  LieData L;
  const int d = 3 + m.dim1;
  L.g = Eigen::MatrixXd::Identity(d, d);
  L.structure.assign(d * d * d, 0.0);
  auto idx3 = [d](int a, int b, int c) { return (a * d + b) * d + c; };
  const double c0 = 2.0 / m.radius0, c1 = 2.0 / m.radius1;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const int e = levi_civita3(i, j, k);
        if (e != 0) {
          L.structure[idx3(i, j, k)] = c0 * e;
          if (m.dim1 == 3) L.structure[idx3(3 + i, 3 + j, 3 + k)] = c1 * e;
        }
      }
  const double v0 = 2.0 * kPi * kPi * std::pow(m.radius0, 3);
  const double v1 = m.dim1 == 3 ? 2.0 * kPi * kPi * std::pow(m.radius1, 3)
                                : 2.0 * kPi * m.radius1;
  L.volume0 = v0 * v1;
  L.ab = 1.0 / std::sqrt(v0 * v1);
  if (m.mixed_tt && amplitude != 0.0) {
    L.g(0, 3) = L.g(3, 0) = amplitude * L.ab;
  }
  return L;
}

CurvatureBundle lie_curvature(const LieData& L) {
  const int d = static_cast<int>(L.g.rows());
  CurvatureBundle b;
  b.dim = d;
  b.metric = L.g;
  Eigen::LLT<Eigen::MatrixXd> llt(b.metric);
  if (llt.info() != Eigen::Success)
    throw DegenerateMetric("left-invariant metric is not positive definite");
  b.metric_inv = llt.solve(Eigen::MatrixXd::Identity(d, d));

  auto idx3 = [d](int a, int bq, int c) { return (a * d + bq) * d + c; };
  auto C = [&](int a, int bq, int c) { return L.structure[idx3(a, bq, c)]; };
  auto Cg = [&](int a, int bq, int c) {
    double v = 0.0;
    for (int k = 0; k < d; ++k) v += C(a, bq, k) * L.g(k, c);
    return v;
  };

  // Koszul for left-invariant fields.
  std::vector<double> low(d * d * d), gam(d * d * d);
  for (int a = 0; a < d; ++a)
    for (int bq = 0; bq < d; ++bq)
      for (int c = 0; c < d; ++c)
        low[idx3(a, bq, c)] = 0.5 * (Cg(a, bq, c) - Cg(bq, c, a) + Cg(c, a, bq));
  for (int a = 0; a < d; ++a)
    for (int bq = 0; bq < d; ++bq)
      for (int c = 0; c < d; ++c) {
        double v = 0.0;
        for (int e = 0; e < d; ++e) v += b.metric_inv(c, e) * low[idx3(a, bq, e)];
        gam[idx3(c, a, bq)] = v;  // Gamma^c_{a b}
      }

  auto idx4 = [d](int a, int bq, int c, int e) { return ((a * d + bq) * d + c) * d + e; };
  std::vector<double> riem_up(d * d * d * d, 0.0);
  for (int a = 0; a < d; ++a)
    for (int bq = 0; bq < d; ++bq)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          double v = 0.0;
          for (int f = 0; f < d; ++f) {
            v += gam[idx3(f, bq, c)] * gam[idx3(e, a, f)] -
                 gam[idx3(f, a, c)] * gam[idx3(e, bq, f)] -
                 C(a, bq, f) * gam[idx3(e, f, c)];
          }
          riem_up[idx4(e, a, bq, c)] = v;  // (R(e_a, e_b) e_c)^e
        }

  b.riemann.assign(static_cast<size_t>(d) * d * d * d, 0.0);
  for (int a = 0; a < d; ++a)
    for (int bq = 0; bq < d; ++bq)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          double v = 0.0;
          for (int f = 0; f < d; ++f) v += b.metric(e, f) * riem_up[idx4(f, a, bq, c)];
          b.riemann[idx4(a, bq, c, e)] = v;
        }
  b.ricci = Eigen::MatrixXd::Zero(d, d);
  for (int bq = 0; bq < d; ++bq)
    for (int c = 0; c < d; ++c) {
      double v = 0.0;
      for (int a = 0; a < d; ++a) v += riem_up[idx4(a, a, bq, c)];
      b.ricci(bq, c) = v;
    }
  b.scalar = (b.metric_inv * b.ricci).trace();
  return b;
}

} // namespace

CurvatureBundle curvature_from_metric_jets(const std::vector<std::vector<Jet2>>& metric_jets) {
  return curvature_from_jets(metric_jets);
}

int model_dim(const MetricModel& model) {
  if (const auto* s = std::get_if<ProductSpheresModel>(&model)) {
    int n = 0;
    for (const auto& f : s->factors) n += f.dim;
    return n;
  }
  if (const auto* l = std::get_if<LieGroupProductModel>(&model)) return 3 + l->dim1;
  const auto& c = std::get<ProductChartModel>(model);
  int n = 0;
  for (const auto& f : c.factors) n += f.dim;
  return n;
}

Eigen::VectorXd random_chart_point(const MetricModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.5, kPi - 0.5);
  std::uniform_real_distribution<double> ball(-0.25, 0.25);

  std::vector<ChartFactor> fs;
  if (const auto* s = std::get_if<ProductSpheresModel>(&model)) {
    for (const auto& f : s->factors) fs.push_back({ChartFactor::Kind::Sphere, f.dim, f.radius});
  } else if (const auto* c = std::get_if<ProductChartModel>(&model)) {
    fs = c->factors;
  } else {
    return Eigen::VectorXd::Zero(6);  // homogeneous model, point is irrelevant
  }
  const auto lay = layout_of(fs);
  Eigen::VectorXd p(lay.total);
  for (const auto& blk : lay.blocks) {
    for (int j = 0; j < blk.dim; ++j) {
      p(blk.offset + j) =
          blk.kind == ChartFactor::Kind::Sphere ? angle(rng) : ball(rng);
    }
  }
  return p;
}

CurvatureBundle curvature_at(const MetricModel& model, const Eigen::VectorXd& point,
                             double amplitude) {
  if (const auto* s = std::get_if<ProductSpheresModel>(&model)) {
    const auto lay = spheres_layout(*s);
    SphereModelContext ctx;
    if (s->perturbation.has_value()) {
      ctx.perturbed = true;
      ctx.src = s->perturbation->source_factor;
      ctx.tgt = s->perturbation->target_factor;
      ctx.harmonic = s->perturbation->harmonic_k;
      ctx.norm_coeff = 1.0;  // raw profile for pointwise queries
    }
    const auto g = chart_metric_jets(lay, point, ctx.perturbed ? &ctx : nullptr, amplitude);
    return curvature_from_jets(g);
  }
  if (const auto* l = std::get_if<LieGroupProductModel>(&model)) {
    return lie_curvature(lie_data(*l, amplitude));
  }
  const auto& c = std::get<ProductChartModel>(model);
  const auto lay = layout_of(c.factors);
  const auto g = chart_metric_jets(lay, point, nullptr, 0.0);
  return curvature_from_jets(g);
}

InvariantSet invariants(const CurvatureBundle& b) {
  const int d = b.dim;
  if (d < 3) throw UnsupportedCombination("invariants need total dimension >= 3");
  InvariantSet inv;
  inv.s = b.scalar;
  inv.ric_sq = (b.metric_inv * b.ricci * b.metric_inv * b.ricci).trace();

  auto idx4 = [d](int a, int bq, int c, int e) { return ((a * d + bq) * d + c) * d + e; };
  // raise all four indices successively
  std::vector<double> up(b.riemann);
  std::vector<double> tmp(up.size());
  for (int pos = 0; pos < 4; ++pos) {
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            const int own = pos == 0 ? i : (pos == 1 ? j : (pos == 2 ? k : l));
            double v = 0.0;
            for (int m = 0; m < d; ++m) {
              int ii = i, jj = j, kk = k, ll = l;
              int* slot[4] = {&ii, &jj, &kk, &ll};
              *slot[pos] = m;
              v += b.metric_inv(own, m) * up[idx4(ii, jj, kk, ll)];
            }
            tmp[idx4(i, j, k, l)] = v;
          }
    up.swap(tmp);
  }
  double r2 = 0.0;
  for (size_t i = 0; i < up.size(); ++i) r2 += up[i] * b.riemann[i];
  inv.riem_sq = r2;

  const double n = d;
  inv.weyl_sq = inv.riem_sq - (4.0 / (n - 2.0)) * (inv.ric_sq - inv.s * inv.s / (2.0 * (n - 1.0)));
  if (std::abs(inv.weyl_sq) <= 1e-10) inv.weyl_sq = 0.0;
  return inv;
}

Eigen::MatrixXd rcheck_tensor(const CurvatureBundle& b) {
  const int d = b.dim;
  auto idx4 = [d](int a, int bq, int c, int e) { return ((a * d + bq) * d + c) * d + e; };
  // raise the last three indices of R once
  std::vector<double> up3(static_cast<size_t>(d) * d * d * d, 0.0);
  for (int p = 0; p < d; ++p)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          double v = 0.0;
          for (int a = 0; a < d; ++a)
            for (int bq = 0; bq < d; ++bq)
              for (int c = 0; c < d; ++c)
                v += b.metric_inv(i, a) * b.metric_inv(j, bq) * b.metric_inv(k, c) *
                     b.riemann[idx4(p, a, bq, c)];
          up3[idx4(p, i, j, k)] = v;
        }
  Eigen::MatrixXd rc = Eigen::MatrixXd::Zero(d, d);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) {
      double v = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            v += b.riemann[idx4(p, i, j, k)] * up3[idx4(q, i, j, k)];
      rc(p, q) = v;
    }
  return rc;
}

// ---------------------------------------------------------------------------
// Quadrature-backed functionals.

namespace {

double integrand_of(const FunctionalId& f, const InvariantSet& inv) {
  switch (f.kind) {
    case FunctionalId::Kind::Ric: return inv.ric_sq;
    case FunctionalId::Kind::S: return inv.s * inv.s;
    case FunctionalId::Kind::R: return inv.riem_sq;
    case FunctionalId::Kind::W2: return inv.weyl_sq;
    case FunctionalId::Kind::Ft: return inv.ric_sq + f.t * inv.s * inv.s;
    case FunctionalId::Kind::WnHalf: break;
  }
  throw UnsupportedCombination("no integrand for " + f.name());
}

struct SphereIntegrator {
  const ProductSpheresModel* model;
  SphereModelContext ctx;
  ChartLayout lay;
  double rest_coeff = 1.0;  // unit-sphere volumes outside the polar integral
  int nodes = 0;
  std::vector<double> theta, weight;

  Eigen::VectorXd base_point() const {
    Eigen::VectorXd p(lay.total);
    for (const auto& blk : lay.blocks)
      for (int j = 0; j < blk.dim; ++j) p(blk.offset + j) = 0.5 * kPi;
    return p;
  }

  // integrand callback receives (bundle, theta); weight includes sqrt(det g).
  template <typename F>
  double integrate(double amplitude, F&& fn) const {
    const Eigen::VectorXd base = base_point();
    double acc = 0.0;
    for (int q = 0; q < nodes; ++q) {
      Eigen::VectorXd p = base;
      p(lay.blocks[ctx.src].offset) = theta[q];
      const auto g = chart_metric_jets(lay, p, ctx.perturbed ? &ctx : nullptr, amplitude);
      const auto bundle = curvature_from_jets(g);
      const double dens = std::sqrt(bundle.metric.determinant());
      acc += weight[q] * dens * fn(bundle, theta[q]);
    }
    return acc * rest_coeff;
  }
};

SphereIntegrator make_integrator(const ProductSpheresModel& m, const QuadratureOptions& quad,
                                 double max_amplitude) {
  if (m.factors.size() < 2) throw NotIntegrable("product-sphere models need >= 2 factors");
  SphereIntegrator s;
  s.model = &m;
  s.lay = spheres_layout(m);
  if (m.perturbation.has_value()) {
    const auto& p = *m.perturbation;
    if (p.source_factor == p.target_factor ||
        p.source_factor < 0 || p.source_factor >= static_cast<int>(m.factors.size()) ||
        p.target_factor < 0 || p.target_factor >= static_cast<int>(m.factors.size()))
      throw InvalidSpectralData("perturbation factor indices are invalid");
    if (m.factors[p.source_factor].dim < 2)
      throw UnsupportedCombination("the conformal profile needs a source sphere of dim >= 2");
    s.ctx.perturbed = true;
    s.ctx.src = p.source_factor;
    s.ctx.tgt = p.target_factor;
    s.ctx.harmonic = p.harmonic_k;
    s.ctx.norm_coeff = 1.0;
  } else {
    s.ctx.perturbed = false;
    s.ctx.src = 0;
  }

  s.rest_coeff = unit_sphere_volume(m.factors[s.ctx.src].dim - 1);
  for (size_t i = 0; i < m.factors.size(); ++i)
    if (static_cast<int>(i) != s.ctx.src) s.rest_coeff *= unit_sphere_volume(m.factors[i].dim);

  // Resolve the node count once: double until the plain volume and the
  // squared-profile integrals agree between refinements.
  auto volumes_at = [&](int n, double amp) {
    std::vector<double> nod, wts;
    gauss_legendre(n, nod, wts);
    SphereIntegrator trial = s;
    trial.nodes = n;
    trial.theta.resize(n);
    trial.weight.resize(n);
    for (int i = 0; i < n; ++i) {
      trial.theta[i] = 0.5 * kPi * (nod[i] + 1.0);
      trial.weight[i] = 0.5 * kPi * wts[i];
    }
    const int sd = m.factors[trial.ctx.src].dim;
    const int hk = trial.ctx.perturbed ? trial.ctx.harmonic : 1;
    double vol = 0.0, prof = 0.0, curv = 0.0;
    const Eigen::VectorXd base = trial.base_point();
    for (int q = 0; q < n; ++q) {
      Eigen::VectorXd p = base;
      p(trial.lay.blocks[trial.ctx.src].offset) = trial.theta[q];
      const auto g = chart_metric_jets(trial.lay, p, trial.ctx.perturbed ? &trial.ctx : nullptr, amp);
      const auto bundle = curvature_from_jets(g);
      const double dens = std::sqrt(bundle.metric.determinant());
      const double z = zonal_profile(trial.theta[q], sd, hk);
      vol += trial.weight[q] * dens;
      prof += trial.weight[q] * dens * z * z;
      curv += trial.weight[q] * dens * invariants(bundle).ric_sq;
    }
    return std::array<double, 3>{vol, prof, curv};
  };

  int n = quad.initial_nodes;
  auto prev = volumes_at(n, max_amplitude);
  while (true) {
    const int n2 = 2 * n;
    if (n2 > quad.max_nodes)
      throw QuadratureNotConverged("quadrature did not converge by " +
                                   std::to_string(quad.max_nodes) + " nodes");
    auto cur = volumes_at(n2, max_amplitude);
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      const double denom = std::max(1.0, std::abs(cur[i]));
      if (std::abs(cur[i] - prev[i]) > quad.rel_tol * denom) ok = false;
    }
    if (ok) {
      n = n2;
      break;
    }
    prev = cur;
    n = n2;
  }

  std::vector<double> nod, wts;
  gauss_legendre(n, nod, wts);
  s.nodes = n;
  s.theta.resize(n);
  s.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    s.theta[i] = 0.5 * kPi * (nod[i] + 1.0);
    s.weight[i] = 0.5 * kPi * wts[i];
  }

  // Normalize the conformal profile to unit L2 norm over the product.
  if (s.ctx.perturbed) {
    const int sd = m.factors[s.ctx.src].dim;
    const double z2 = s.integrate(0.0, [&](const CurvatureBundle&, double th) {
      const double z = zonal_profile(th, sd, s.ctx.harmonic);
      return z * z;
    });
    s.ctx.norm_coeff = 1.0 / std::sqrt(z2);
  }
  return s;
}

} // namespace

double model_volume(const MetricModel& model, double amplitude, const QuadratureOptions& quad) {
  if (const auto* s = std::get_if<ProductSpheresModel>(&model)) {
    auto integ = make_integrator(*s, quad, amplitude);
    return integ.integrate(amplitude, [](const CurvatureBundle&, double) { return 1.0; });
  }
  if (const auto* l = std::get_if<LieGroupProductModel>(&model)) {
    const auto L = lie_data(*l, amplitude);
    return L.volume0 * std::sqrt(L.g.determinant());
  }
  throw NotIntegrable("chart-only models have no global volume");
}

double functional_value(const FunctionalId& functional_in, const MetricModel& model,
                        bool normalized, double amplitude, const QuadratureOptions& quad) {
  const FunctionalId functional = functional_in.normalized();
  if (functional.kind == FunctionalId::Kind::WnHalf)
    throw UnsupportedCombination("WnHalf is not evaluated by the oracle");
  const int n = model_dim(model);

  double F = 0.0, V = 0.0;
  if (const auto* s = std::get_if<ProductSpheresModel>(&model)) {
    auto integ = make_integrator(*s, quad, amplitude);
    F = integ.integrate(amplitude, [&](const CurvatureBundle& b, double) {
      return integrand_of(functional, invariants(b));
    });
    V = integ.integrate(amplitude, [](const CurvatureBundle&, double) { return 1.0; });
  } else if (const auto* l = std::get_if<LieGroupProductModel>(&model)) {
    const auto L = lie_data(*l, amplitude);
    const auto b = lie_curvature(L);
    V = L.volume0 * std::sqrt(L.g.determinant());
    F = integrand_of(functional, invariants(b)) * V;
  } else {
    throw NotIntegrable("chart-only models are pointwise; no global integral");
  }
  if (!normalized) return F;
  return std::pow(V, (4.0 - n) / n) * F;
}

namespace {

struct StencilEval {
  double at[7];  // t in {-2h, -h, -h/2, 0, h/2, h, 2h}
};

// 5-point second derivative at steps h and h/2 with Richardson combination.
void combine_stencil(const StencilEval& e, double h, FdResult& out) {
  const double step_h = h, step_h2 = 0.5 * h;
  const double d_h = (-e.at[6] + 16.0 * e.at[5] - 30.0 * e.at[3] + 16.0 * e.at[1] - e.at[0]) /
                     (12.0 * step_h * step_h);
  const double d_h2 = (-e.at[5] + 16.0 * e.at[4] - 30.0 * e.at[3] + 16.0 * e.at[2] - e.at[1]) /
                      (12.0 * step_h2 * step_h2);
  out.value = (16.0 * d_h2 - d_h) / 15.0;
  out.error_estimate = std::abs(d_h2 - d_h) / 15.0;
  out.first_derivative = (e.at[0] - 8.0 * e.at[1] + 8.0 * e.at[5] - e.at[6]) / (12.0 * h);
  out.step = h;
}

} // namespace

FdResult fd_second_variation(const FunctionalId& functional, const MetricModel& model,
                             const FdOptions& opts) {
  const int n = model_dim(model);
  const double exponent = (4.0 - n) / n;

  // direction scale: largest pointwise relative metric change per unit t
  double dir_scale = 1.0;
  std::function<double(double)> psi;

  if (const auto* s = std::get_if<ProductSpheresModel>(&model)) {
    if (!s->perturbation.has_value())
      throw UnsupportedCombination("second variation needs a perturbation direction");
    auto integ = std::make_shared<SphereIntegrator>(make_integrator(*s, opts.quad, 0.0));
    const int sd = s->factors[integ->ctx.src].dim;
    double zmax = 0.0;
    for (double th : integ->theta)
      zmax = std::max(zmax, std::abs(zonal_profile(th, sd, integ->ctx.harmonic)));
    dir_scale = zmax * integ->ctx.norm_coeff;
    const double V0 = integ->integrate(0.0, [](const CurvatureBundle&, double) { return 1.0; });
    const FunctionalId f = functional.normalized();
    psi = [integ, f, V0, exponent](double t) {
      const double F = integ->integrate(t, [&](const CurvatureBundle& b, double) {
        return integrand_of(f, invariants(b));
      });
      const double V = integ->integrate(t, [](const CurvatureBundle&, double) { return 1.0; });
      return std::pow(V / V0, exponent) * F;
    };
  } else if (const auto* l = std::get_if<LieGroupProductModel>(&model)) {
    if (!l->mixed_tt)
      throw UnsupportedCombination("second variation needs a perturbation direction");
    const auto L0 = lie_data(*l, 0.0);
    dir_scale = L0.ab;
    const double V0 = L0.volume0;
    const LieGroupProductModel lm = *l;
    const FunctionalId f = functional.normalized();
    psi = [lm, f, V0, exponent](double t) {
      const auto L = lie_data(lm, t);
      const auto b = lie_curvature(L);
      const double V = L.volume0 * std::sqrt(L.g.determinant());
      const double F = integrand_of(f, invariants(b)) * V;
      return std::pow(V / V0, exponent) * F;
    };
  } else {
    throw NotIntegrable("chart-only models are pointwise; no global functional");
  }

  double h = opts.base_step;
  if (h <= 0.0) {
    h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0) / std::max(1e-6, dir_scale);
    h = std::min(h, 0.125 / std::max(1e-6, dir_scale));
  }

  StencilEval e;
  const double ts[7] = {-2.0 * h, -h, -0.5 * h, 0.0, 0.5 * h, h, 2.0 * h};
  for (int i = 0; i < 7; ++i) e.at[i] = psi(ts[i]);

  FdResult out;
  combine_stencil(e, h, out);

  const double scale = std::max(1.0, std::abs(out.value));
  if (out.error_estimate > 1e-3 * scale)
    throw StepSelectionFailed("finite-difference error estimate too large: " +
                              std::to_string(out.error_estimate));
  if (opts.check_critical && std::abs(out.first_derivative) >
                                 opts.first_derivative_tol * std::max(1.0, std::abs(out.value)))
    throw NotCriticalError("first derivative does not vanish: " +
                           std::to_string(out.first_derivative));
  return out;
}

FdResult rcheck_pairing_fd(const LieGroupProductModel& model) {
  const auto L0 = lie_data(model, 0.0);
  const double ab = L0.ab;
  const double vol = L0.volume0;

  auto rc_at = [&](double t) {
    return rcheck_tensor(lie_curvature(lie_data(model, t)));
  };
  const double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0) / std::max(1e-6, ab);

  auto pairing_deriv = [&](double step) {
    const Eigen::MatrixXd d =
        (rc_at(-2.0 * step) - 8.0 * rc_at(-step) + 8.0 * rc_at(step) - rc_at(2.0 * step)) /
        (12.0 * step);
    // pair against h = alpha0 (.) alpha1 (two symmetric entries ab at (0,3))
    return 2.0 * d(0, 3) * ab * vol;
  };

  FdResult out;
  const double p1 = pairing_deriv(h);
  const double p2 = pairing_deriv(0.5 * h);
  out.value = (16.0 * p2 - p1) / 15.0;
  out.error_estimate = std::abs(p2 - p1) / 15.0;
  out.first_derivative = 0.0;
  out.step = h;
  return out;
}

} // namespace curvstab
