#include "focklab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>

#include "focklab/kernel.hpp"
#include "focklab/numerics.hpp"

namespace focklab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm2(const CVec& v) {
  double s = 0.0;
  for (const C& c : v) s += std::norm(c);
  return s;
}

C inner(const CVec& a, const CVec& b) {  // <a,b> = sum a_j conj(b_j)
  C s(0.0, 0.0);
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * std::conj(b[j]);
  return s;
}

double beta_unit_exact(const MomentTable& table, double rho) {
  const double x = rho * rho;
  const LogDerivatives ld = log_derivatives(table, x);
  return std::sqrt(std::max(ld.kp_over_k + x * ld.curvature, 1e-300));
}

// ======================= grid shortest paths =============================

/* 16-neighbor stencil: axis, diagonal, and knight moves.  The worst-case
 * overshoot against straight-line travel is ~2.36% (kGridStencilBias). */
constexpr int kOffsets[16][2] = {
    {1, 0},  {0, 1},  {-1, 0}, {0, -1}, {1, 1},   {1, -1},  {-1, 1},  {-1, -1},
    {1, 2},  {2, 1},  {1, -2}, {2, -1}, {-1, 2},  {-2, 1},  {-1, -2}, {-2, -1}};

std::vector<double> dijkstra_grid(const RadialMetricProfile& profile,
                                  double x0, double y0, double h, int nx,
                                  int ny, int src, int target) {
  const int n = nx * ny;
  std::vector<double> dist(std::size_t(n), kInf);
  std::vector<char> done(std::size_t(n), 0);
  using QE = std::pair<double, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
  dist[std::size_t(src)] = 0.0;
  pq.push({0.0, src});

  double step_len[16];
  for (int k = 0; k < 16; ++k)
    step_len[k] = h * std::hypot(double(kOffsets[k][0]), double(kOffsets[k][1]));

  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (done[std::size_t(u)]) continue;
    done[std::size_t(u)] = 1;
    if (u == target) break;
    const int ix = u % nx, iy = u / nx;
    for (int k = 0; k < 16; ++k) {
      const int jx = ix + kOffsets[k][0], jy = iy + kOffsets[k][1];
      if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
      const int v = jy * nx + jx;
      if (done[std::size_t(v)]) continue;
      const double mx = x0 + 0.5 * (ix + jx) * h;
      const double my = y0 + 0.5 * (iy + jy) * h;
      const double w = profile.beta_unit(std::hypot(mx, my)) * step_len[k];
      if (d + w < dist[std::size_t(v)]) {
        dist[std::size_t(v)] = d + w;
        pq.push({d + w, v});
      }
    }
  }
  return dist;
}

// ===================== segment curve family ==============================

void append_line(CVec a, CVec b, int m, std::vector<CVec>& out) {
  for (int i = 1; i <= m; ++i) {
    CVec p(a.size());
    const double t = double(i) / m;
    for (std::size_t j = 0; j < a.size(); ++j)
      p[j] = a[j] * (1.0 - t) + b[j] * t;
    out.push_back(std::move(p));
  }
}

// Great-circle arc at fixed norm between directions u and v (unit vectors).
void append_arc(const CVec& u, const CVec& v, double radius, int m,
                std::vector<CVec>& out) {
  const double cos_om = std::clamp(std::real(inner(u, v)), -1.0, 1.0);
  const double om = std::acos(cos_om);
  if (om < 1e-14) return;
  const double s = std::sin(om);
  for (int i = 1; i <= m; ++i) {
    const double t = double(i) / m;
    const double cu = std::sin((1.0 - t) * om) / s, cv = std::sin(t * om) / s;
    CVec p(u.size());
    for (std::size_t j = 0; j < u.size(); ++j)
      p[j] = radius * (cu * u[j] + cv * v[j]);
    out.push_back(std::move(p));
  }
}

double polyline_min_length(const MomentTable& table, const CVec& z,
                           const CVec& w, int m) {
  const double a = std::sqrt(norm2(z)), b = std::sqrt(norm2(w));
  std::vector<std::vector<CVec>> paths;

  {  // straight chord
    std::vector<CVec> p{z};
    append_line(z, w, m, p);
    paths.push_back(std::move(p));
  }
  if (a > 0.0 && b > 0.0) {
    CVec u(z), v(w);
    for (C& c : u) c /= a;
    for (C& c : v) c /= b;
    {  // radial out/in to |w|, then arc at |w|
      std::vector<CVec> p{z};
      CVec zb(u);
      for (C& c : zb) c *= b;
      append_line(z, zb, m, p);
      append_arc(u, v, b, m, p);
      paths.push_back(std::move(p));
    }
    {  // arc at |z|, then radial
      std::vector<CVec> p{z};
      append_arc(u, v, a, m, p);
      CVec wa(v);
      for (C& c : wa) c *= a;
      append_line(wa, w, m, p);
      paths.push_back(std::move(p));
    }
  }

  double best = kInf;
  for (const auto& p : paths)
    best = std::min(best, path_length(table, std::span<const CVec>(p)));
  return best;
}

}  // namespace

// ============================ metric =====================================

MetricSample metric(const MomentTable& table, const CVec& z, const CVec& xi) {
  if (z.size() != xi.size() || z.empty())
    throw std::invalid_argument("metric: z and xi must have equal dimension");
  const double xi2 = norm2(xi);
  if (xi2 == 0.0) throw std::domain_error("metric: direction must be nonzero");

  const double x = norm2(z);
  const double ip2 = std::norm(inner(z, xi));
  const LogDerivatives ld = log_derivatives(table, x);
  const Weight& w = table.weight;

  MetricSample s;
  s.z = z;
  s.xi = xi;
  s.beta2 = xi2 * ld.kp_over_k + ip2 * ld.curvature;
  s.alpha2 = xi2 * w.psi1(x) + ip2 * w.psi2(x);
  s.ratio = s.beta2 / s.alpha2;
  return s;
}

double path_length(const MomentTable& table, std::span<const CVec> vertices) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const CVec& a = vertices[i];
    const CVec& b = vertices[i + 1];
    CVec mid(a.size()), dv(a.size());
    double d2 = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      mid[j] = 0.5 * (a[j] + b[j]);
      dv[j] = b[j] - a[j];
      d2 += std::norm(dv[j]);
    }
    if (d2 == 0.0) continue;
    len += std::sqrt(metric(table, mid, dv).beta2);
  }
  return len;
}

RadialMetricProfile::RadialMetricProfile(const MomentTable& table,
                                         double rho_max, int samples)
    : rho_max_(rho_max) {
  if (!(rho_max > 0.0) || samples < 2)
    throw std::invalid_argument("metric profile needs rho_max > 0");
  values_.resize(std::size_t(samples));
  for (int i = 0; i < samples; ++i)
    values_[std::size_t(i)] =
        beta_unit_exact(table, rho_max * double(i) / (samples - 1));
}

double RadialMetricProfile::beta_unit(double rho) const {
  const int n = int(values_.size());
  const double t = std::clamp(rho / rho_max_, 0.0, 1.0) * (n - 1);
  const int i = std::min(int(t), n - 2);
  const double f = t - i;
  return values_[std::size_t(i)] * (1.0 - f) + values_[std::size_t(i + 1)] * f;
}

// =========================== distances ===================================

const char* to_string(DistanceMethod m) {
  switch (m) {
    case DistanceMethod::segment: return "segment";
    case DistanceMethod::grid: return "grid";
    case DistanceMethod::ellipsoid: return "ellipsoid";
  }
  return "?";
}

DistanceMethod distance_method_from_string(const std::string& s) {
  if (s == "segment") return DistanceMethod::segment;
  if (s == "grid") return DistanceMethod::grid;
  if (s == "ellipsoid") return DistanceMethod::ellipsoid;
  throw std::invalid_argument("unknown distance method: " + s);
}

double quasi_distance(const Weight& w, const CVec& z, const CVec& target) {
  const double x = norm2(z);
  if (x == 0.0) return std::sqrt(norm2(target) * w.phi1(0.0));
  CVec proj(z.size());
  if (z.size() == 1) {
    proj = target;
  } else {
    const C c = inner(target, z) / x;
    for (std::size_t j = 0; j < z.size(); ++j) proj[j] = c * z[j];
  }
  double radial2 = 0.0, tang2 = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    radial2 += std::norm(z[j] - proj[j]);
    tang2 += std::norm(target[j] - proj[j]);
  }
  return std::sqrt(radial2 * w.phi1(x)) + std::sqrt(tang2 * w.psi1(x));
}

namespace {

struct PairGrid {
  double x0 = 0, y0 = 0, h = 0;
  int nx = 0, ny = 0;
};

PairGrid make_pair_grid(C z, C w, double h, std::size_t node_cap) {
  PairGrid g;
  const double pad = 0.35 * std::abs(z - w) + 4.0 * h;
  const double bx0 = std::min(z.real(), w.real()) - pad;
  const double bx1 = std::max(z.real(), w.real()) + pad;
  const double by0 = std::min(z.imag(), w.imag()) - pad;
  const double by1 = std::max(z.imag(), w.imag()) + pad;
  double span = std::max(bx1 - bx0, by1 - by0);
  // Honor the node cap by coarsening.
  double nodes = (span / h + 1) * (span / h + 1);
  if (nodes > double(node_cap)) g.h = span / (std::sqrt(double(node_cap)) - 1);
  else g.h = h;
  g.nx = int(std::ceil((bx1 - bx0) / g.h)) + 1;
  g.ny = int(std::ceil((by1 - by0) / g.h)) + 1;
  g.x0 = bx0;
  g.y0 = by0;
  return g;
}

double grid_pair_run(const RadialMetricProfile& profile, C z, C w, double h,
                     std::size_t node_cap) {
  const PairGrid g = make_pair_grid(z, w, h, node_cap);
  auto snap = [&](C p) {
    const int ix =
        std::clamp(int(std::lround((p.real() - g.x0) / g.h)), 0, g.nx - 1);
    const int iy =
        std::clamp(int(std::lround((p.imag() - g.y0) / g.h)), 0, g.ny - 1);
    return iy * g.nx + ix;
  };
  auto node_pos = [&](int u) {
    return C(g.x0 + (u % g.nx) * g.h, g.y0 + (u / g.nx) * g.h);
  };
  // Metric length of the short segment between a continuous endpoint and
  // its snapped node; without it the path undershoots by O(h).
  auto stub = [&](C p, C q) {
    return profile.beta_unit(std::abs(0.5 * (p + q))) * std::abs(p - q);
  };
  const int src = snap(z), dst = snap(w);
  if (src == dst) return stub(z, w);
  const auto dist =
      dijkstra_grid(profile, g.x0, g.y0, g.h, g.nx, g.ny, src, dst);
  return stub(z, node_pos(src)) + dist[std::size_t(dst)] +
         stub(node_pos(dst), w);
}

}  // namespace

DistanceResult distance(const MomentTable& table, const CVec& z,
                        const CVec& w, DistanceMethod method) {
  if (z.size() != w.size() || z.empty())
    throw std::invalid_argument("distance: dimension mismatch");

  DistanceResult res;
  switch (method) {
    case DistanceMethod::ellipsoid:
      res.rho_hat = quasi_distance(table.weight, z, w);
      res.kind = DistanceKind::approximation;
      res.refine_delta = 0.0;
      return res;

    case DistanceMethod::segment: {
      const double d64 = polyline_min_length(table, z, w, 64);
      const double d128 = polyline_min_length(table, z, w, 128);
      res.rho_hat = d128;
      res.kind = DistanceKind::upper_bound;
      res.refine_delta =
          d128 > 0.0 ? std::abs(d64 - d128) / d128 : std::abs(d64 - d128);
      return res;
    }

    case DistanceMethod::grid: {
      if (z.size() != 1)
        throw std::invalid_argument("grid distance supports n=1 only");
      const C a = z[0], b = w[0];
      if (a == b) return {0.0, DistanceKind::approximation, 0.0};
      const double l_hat = polyline_min_length(table, z, w, 64);
      const double rho_hi =
          std::max(std::abs(a), std::abs(b)) + 0.5 * std::abs(a - b) + 1.0;
      const RadialMetricProfile profile(table, rho_hi * 1.8, 1024);
      double b_max = 0.0;
      for (int i = 0; i <= 64; ++i)
        b_max = std::max(b_max, profile.beta_unit(rho_hi * i / 64.0));
      const double h = std::max(l_hat / 48.0, 1e-9) / b_max;
      const double d1 = grid_pair_run(profile, a, b, h, 100000);
      const double d2 = grid_pair_run(profile, a, b, h * 0.5, 400000);
      res.rho_hat = d2;
      res.kind = DistanceKind::approximation;
      res.refine_delta = d2 > 0.0 ? std::abs(d1 - d2) / d2 : 0.0;
      return res;
    }
  }
  throw std::logic_error("unreachable distance method");
}

double DistanceField::at(C w) const {
  const double fx = (w.real() - x0) / h, fy = (w.imag() - y0) / h;
  if (fx < 0.0 || fy < 0.0 || fx > nx - 1 || fy > ny - 1) return kInf;
  const int ix = std::min(int(fx), nx - 2), iy = std::min(int(fy), ny - 2);
  const double tx = fx - ix, ty = fy - iy;
  const double d00 = dist[std::size_t(iy * nx + ix)];
  const double d10 = dist[std::size_t(iy * nx + ix + 1)];
  const double d01 = dist[std::size_t((iy + 1) * nx + ix)];
  const double d11 = dist[std::size_t((iy + 1) * nx + ix + 1)];
  return (d00 * (1 - tx) + d10 * tx) * (1 - ty) +
         (d01 * (1 - tx) + d11 * tx) * ty;
}

DistanceField distance_field(const MomentTable& table, C center,
                             double metric_radius, int resolution) {
  if (!(metric_radius > 0.0) || resolution < 8)
    throw std::invalid_argument("distance_field: bad radius or resolution");
  const double rho_c = std::abs(center);
  const double b_c = beta_unit_exact(table, rho_c);
  double e = 1.4 * metric_radius / b_c;
  double b_min = b_c;
  for (int i = 0; i <= 16; ++i) {
    const double rho = std::max(0.0, rho_c - e) + (2.0 * e) * i / 16.0;
    b_min = std::min(b_min, beta_unit_exact(table, rho));
  }
  e = 1.4 * metric_radius / b_min;

  DistanceField f;
  f.nx = f.ny = resolution + 1;
  f.h = 2.0 * e / resolution;
  f.x0 = center.real() - e;
  f.y0 = center.imag() - e;
  const double rho_corner = rho_c + e * 1.5;
  const RadialMetricProfile profile(table, rho_corner, 1024);
  const int src = (resolution / 2) * f.nx + resolution / 2;
  f.dist = dijkstra_grid(profile, f.x0, f.y0, f.h, f.nx, f.ny, src, -1);
  return f;
}

// ============================ lattices ===================================

namespace {

struct CandidateGrid {
  struct Ring {
    double rho = 0;
    int first = 0;
    int count = 0;
    double phi0 = 0;
    double dphi = 0;
  };
  std::vector<C> pts;
  std::vector<double> sqrt_phi1;  // sqrt(Phi'(|pt|^2)) per candidate
  std::vector<Ring> rings;
  std::vector<double> ring_rho;
};

CandidateGrid generate_candidates(const MomentTable& table, double R,
                                  double r) {
  if (!(R > 0.0) || !(r > 0.0))
    throw std::invalid_argument("lattice needs R > 0 and r > 0");
  const RadialMetricProfile profile(table, R * 1.0001, 2048);
  const Weight& w = table.weight;

  CandidateGrid g;
  auto push_ring = [&](double rho, int count, double phi0) {
    CandidateGrid::Ring ring;
    ring.rho = rho;
    ring.first = int(g.pts.size());
    ring.count = count;
    ring.phi0 = phi0;
    ring.dphi = 2.0 * kPi / count;
    for (int j = 0; j < count; ++j) {
      const C p = std::polar(rho, phi0 + j * ring.dphi);
      g.pts.push_back(p);
      g.sqrt_phi1.push_back(std::sqrt(w.phi1(std::norm(p))));
    }
    g.rings.push_back(ring);
    g.ring_rho.push_back(rho);
  };

  push_ring(0.0, 1, 0.0);
  double rho = 0.0;
  int k = 0;
  while (true) {
    const double step = r / (8.0 * profile.beta_unit(rho));
    if (!(step > R * 1e-7))
      throw std::invalid_argument(
          "covering radius unresolvable at the domain scale");
    rho += step;
    if (rho > R) break;
    const double dphi_target = r / (8.0 * profile.beta_unit(rho));
    const int count = std::max(6, int(std::ceil(2.0 * kPi * rho / dphi_target)));
    push_ring(rho, count, (++k % 2) ? 0.5 * (2.0 * kPi / count) : 0.0);
    if (g.pts.size() > 3000000)
      throw std::length_error("lattice candidate grid exceeds 3e6 points");
  }
  return g;
}

// Visit candidate indices within Euclidean radius ra of point a.
template <typename Fn>
void for_candidates_near(const CandidateGrid& g, C a, double ra, Fn&& fn) {
  const double rho_a = std::abs(a);
  const double phi_a = std::arg(a);
  auto lo = std::lower_bound(g.ring_rho.begin(), g.ring_rho.end(),
                             rho_a - ra);
  for (std::size_t ri = std::size_t(lo - g.ring_rho.begin());
       ri < g.rings.size() && g.rings[ri].rho <= rho_a + ra; ++ri) {
    const auto& ring = g.rings[ri];
    if (ring.count == 1) {
      fn(ring.first);
      continue;
    }
    bool full = rho_a <= ra || ring.rho <= 1e-12;
    int jc = 0, m = 0;
    if (!full) {
      const double cg = (rho_a * rho_a + ring.rho * ring.rho - ra * ra) /
                        (2.0 * rho_a * ring.rho);
      if (cg <= -1.0) {
        full = true;
      } else {
        const double gamma = std::acos(std::clamp(cg, -1.0, 1.0));
        m = int((gamma + 1.5 * ring.dphi) / ring.dphi) + 1;
        jc = int(std::lround((phi_a - ring.phi0) / ring.dphi));
        if (2 * m + 1 >= ring.count) full = true;
      }
    }
    if (full) {
      for (int j = 0; j < ring.count; ++j) fn(ring.first + j);
    } else {
      for (int dj = -m; dj <= m; ++dj) {
        const int j = ((jc + dj) % ring.count + ring.count) % ring.count;
        fn(ring.first + j);
      }
    }
  }
}

double sym_quasi(C a, double sq_a, C c, double sq_c) {
  return std::abs(a - c) * std::max(sq_a, sq_c);
}

}  // namespace

PsiLattice build_lattice(const MomentTable& table, double R, double r,
                         DistanceMethod backend) {
  if (backend == DistanceMethod::segment)
    throw std::invalid_argument("lattice backend must be grid or ellipsoid");
  CandidateGrid g = generate_candidates(table, R, r);
  const std::size_t n = g.pts.size();
  std::vector<double> dmin(n, kInf);

  PsiLattice lat;
  lat.covering_radius = r;
  lat.domain_radius = R;
  lat.backend = backend;

  for (std::size_t p = 0; p < n; ++p) {
    if (dmin[p] < r) continue;
    const C a = g.pts[p];
    lat.points.push_back(a);

    if (backend == DistanceMethod::ellipsoid) {
      const double sq_a = g.sqrt_phi1[p];
      const double ra = r / std::max(sq_a, 1e-300);
      auto update = [&](int idx) {
        const std::size_t i = std::size_t(idx);
        const double d = sym_quasi(a, sq_a, g.pts[i], g.sqrt_phi1[i]);
        dmin[i] = std::min(dmin[i], d);
      };
      if (!(ra < 2.0 * R)) {
        for (std::size_t i = 0; i < n; ++i) update(int(i));
      } else {
        for_candidates_near(g, a, ra, update);
      }
    } else {
      const DistanceField field = distance_field(table, a, r * 1.3);
      const double half_diag =
          0.5 * std::hypot((field.nx - 1) * field.h, (field.ny - 1) * field.h);
      for_candidates_near(g, a, half_diag, [&](int idx) {
        const std::size_t i = std::size_t(idx);
        dmin[i] = std::min(dmin[i], field.at(g.pts[i]));
      });
      dmin[p] = 0.0;  // the field source cell is exact
    }
  }

  double gap = 0.0;
  for (double d : dmin) gap = std::max(gap, d);
  lat.max_candidate_gap = gap;
  return lat;
}

int covering_multiplicity(const MomentTable& table, const PsiLattice& lattice,
                          double radius) {
  CandidateGrid g = generate_candidates(table, lattice.domain_radius,
                                        lattice.covering_radius);
  std::vector<int> count(g.pts.size(), 0);
  const Weight& w = table.weight;

  for (const C& a : lattice.points) {
    if (lattice.backend == DistanceMethod::ellipsoid) {
      const double sq_a = std::sqrt(w.phi1(std::norm(a)));
      const double ra = radius / std::max(sq_a, 1e-300);
      auto visit = [&](int idx) {
        const std::size_t i = std::size_t(idx);
        if (sym_quasi(a, sq_a, g.pts[i], g.sqrt_phi1[i]) < radius)
          ++count[i];
      };
      if (!(ra < 2.0 * lattice.domain_radius)) {
        for (std::size_t i = 0; i < g.pts.size(); ++i) visit(int(i));
      } else {
        for_candidates_near(g, a, ra, visit);
      }
    } else {
      const DistanceField field = distance_field(table, a, radius * 1.3);
      const double half_diag =
          0.5 * std::hypot((field.nx - 1) * field.h, (field.ny - 1) * field.h);
      for_candidates_near(g, a, half_diag, [&](int idx) {
        if (field.at(g.pts[std::size_t(idx)]) < radius)
          ++count[std::size_t(idx)];
      });
    }
  }
  int best = 0;
  for (int c : count) best = std::max(best, c);
  return best;
}

LatticeStats lattice_invariants(const MomentTable& table,
                                const PsiLattice& lattice) {
  LatticeStats st;
  st.max_candidate_gap = lattice.max_candidate_gap;
  const Weight& w = table.weight;
  const auto& pts = lattice.points;

  double min_sep = kInf;
  if (lattice.backend == DistanceMethod::ellipsoid) {
    std::vector<double> sq(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      sq[i] = std::sqrt(w.phi1(std::norm(pts[i])));
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double d = sym_quasi(pts[i], sq[i], pts[j], sq[j]);
        if (d < min_sep) min_sep = d;
      }
  } else {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const DistanceField field =
          distance_field(table, pts[i], lattice.covering_radius * 2.5);
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j == i) continue;
        min_sep = std::min(min_sep, field.at(pts[j]));
      }
    }
  }
  st.min_separation = min_sep;
  st.multiplicity = covering_multiplicity(table, lattice,
                                          lattice.covering_radius);
  st.multiplicity_doubled = covering_multiplicity(
      table, lattice, 2.0 * lattice.covering_radius);
  return st;
}

// =========================== ball volume =================================

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;  // [0,1), platform-independent
}

C disc_point(std::mt19937_64& rng) {  // uniform in the closed unit disc
  while (true) {
    const double u = 2.0 * unit_uniform(rng) - 1.0;
    const double v = 2.0 * unit_uniform(rng) - 1.0;
    if (u * u + v * v <= 1.0) return {u, v};
  }
}

}  // namespace

BallVolume ball_volume(const MomentTable& table, const CVec& z, double r,
                       const BallVolumeOptions& opt) {
  const std::size_t n = z.size();
  if (n < 1 || n > 2)
    throw std::invalid_argument("ball_volume supports n in {1,2}");
  if (!(r > 0.0)) throw std::domain_error("ball_volume needs r > 0");
  const Weight& w = table.weight;
  const double x = norm2(z);

  BallVolume out;
  out.root_law_estimate = std::pow(w.phi1(x), -0.5) *
                          std::pow(w.psi1(x), 0.5 * double(n - 1));
  out.cell_law_estimate =
      1.0 / w.phi1(x) * std::pow(w.psi1(x), -double(n - 1));

  if (opt.sampler == BallSampler::grid_field) {
    if (n != 1)
      throw std::invalid_argument("grid ball sampler supports n=1 only");
    const DistanceField field = distance_field(table, z[0], r * 1.15, 192);
    long long inside = 0;
    for (double d : field.dist)
      if (d < r) ++inside;
    out.measured = double(inside) * field.h * field.h;
    out.inside = inside;
    out.budget = (long long)field.dist.size();
    out.std_error = 0.0;
    return out;
  }

  const double s_rad = std::sqrt(w.phi1(x));
  if (!(s_rad > 0.0))
    throw std::domain_error(
        "ellipsoid ball sampler degenerate where Phi' vanishes; use the "
        "grid sampler");
  const double r1 = 2.5 * r / s_rad;
  double region = kPi * r1 * r1;

  CVec e1, e2;
  double r2 = 0.0;
  if (n == 2) {
    if (x == 0.0)
      throw std::domain_error("n=2 ball sampler needs z != 0");
    const double a = std::sqrt(x);
    e1 = {z[0] / a, z[1] / a};
    // Orthonormal complement within C^2.
    CVec cand = (std::norm(z[0]) <= std::norm(z[1])) ? CVec{C(1, 0), C(0, 0)}
                                                     : CVec{C(0, 0), C(1, 0)};
    const C c = inner(cand, e1);
    e2 = {cand[0] - c * e1[0], cand[1] - c * e1[1]};
    const double nn = std::sqrt(norm2(e2));
    e2[0] /= nn;
    e2[1] /= nn;
    r2 = 2.5 * r / std::sqrt(w.psi1(x));
    region *= kPi * r2 * r2;
  }

  std::mt19937_64 rng(opt.seed);
  long long inside = 0;
  for (int i = 0; i < opt.budget; ++i) {
    CVec p(z);
    const C u = disc_point(rng);
    if (n == 1) {
      p[0] += r1 * u;
    } else {
      const C v = disc_point(rng);
      for (int j = 0; j < 2; ++j)
        p[std::size_t(j)] += r1 * u * e1[std::size_t(j)] +
                             r2 * v * e2[std::size_t(j)];
    }
    if (quasi_distance(w, z, p) < r) ++inside;
  }
  const double frac = double(inside) / double(opt.budget);
  out.measured = region * frac;
  out.std_error =
      region * std::sqrt(std::max(frac * (1.0 - frac), 0.0) / opt.budget);
  out.inside = inside;
  out.budget = opt.budget;
  return out;
}

}  // namespace focklab
