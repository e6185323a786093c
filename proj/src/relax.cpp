#include "vatlas/relax.hpp"

#include "vatlas/error.hpp"
#include "vatlas/kernels.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace vatlas {

namespace {

// Area-weighted vertex normals.
void vertex_normals(const TriMesh& m, const VertexStar& star, std::vector<Vec3>& out) {
  const long nv = static_cast<long>(m.vertices.size());
  out.resize(nv);
  for (long v = 0; v < nv; ++v) {
    Vec3 n = Vec3::Zero();
    for (int i = star.offset[v]; i < star.offset[v + 1]; ++i) {
      const auto& t = m.triangles[star.tris[i]];
      n += (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]);
    }
    const double len = n.norm();
    out[v] = len > 0 ? Vec3(n / len) : Vec3::Zero();
  }
}

struct Workspace {
  const TriMesh& m;
  VertexStar star;
  bool parallel;
  std::vector<Vec3> grad;
  std::vector<double> mixed;
  std::vector<Vec3> normal;
  std::vector<double> gn;  // normal component of the area gradient

  Workspace(const TriMesh& mesh, bool par) : m(mesh), star(mesh), parallel(par) {}

  double area() const { return parallel ? area_parallel(m) : area_serial(m); }
  void update() {
    if (parallel) {
      area_gradient_parallel(m, star, grad);
      mixed_areas_parallel(m, star, mixed);
    } else {
      area_gradient_serial(m, grad);
      mixed_areas_serial(m, mixed);
    }
    vertex_normals(m, star, normal);
    gn.resize(grad.size());
    for (std::size_t v = 0; v < grad.size(); ++v) gn[v] = grad[v].dot(normal[v]);
  }
  double residual() const {
    double r = 0;
    for (std::size_t v = 0; v < m.vertices.size(); ++v)
      if (!m.boundary[v] && mixed[v] > 0) r = std::max(r, std::abs(gn[v]) / (2 * mixed[v]));
    return r;
  }
};

Vec3 normal_of(const TriMesh& m, const std::array<int, 3>& t) {
  return (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]);
}

// Cotangent stiffness on interior vertices; solves L phi = -g for a normal
// displacement phi.
bool preconditioned_direction(const TriMesh& m, const std::vector<int>& unknown, int nf,
                              const std::vector<double>& g, std::vector<double>& phi) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m.triangles.size() * 9);
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int o = t[k], i = t[(k + 1) % 3], j = t[(k + 2) % 3];
      const Vec3 u = m.vertices[i] - m.vertices[o], w = m.vertices[j] - m.vertices[o];
      const double cr = u.cross(w).norm();
      if (cr == 0) return false;
      const double wij = 0.5 * u.dot(w) / cr;
      for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
        if (unknown[a] < 0) continue;
        trip.emplace_back(unknown[a], unknown[a], wij);
        if (unknown[b] >= 0) trip.emplace_back(unknown[a], unknown[b], -wij);
      }
    }
  }
  Eigen::SparseMatrix<double> L(nf, nf);
  L.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(L);
  if (solver.info() != Eigen::Success) return false;
  Eigen::VectorXd rhs(nf);
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    if (unknown[v] >= 0) rhs[unknown[v]] = -g[v];
  const Eigen::VectorXd x = solver.solve(rhs);
  if (solver.info() != Eigen::Success || !x.allFinite()) return false;
  phi.assign(m.vertices.size(), 0.0);
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    if (unknown[v] >= 0) phi[v] = x[unknown[v]];
  return true;
}

}  // namespace

std::vector<double> mean_curvature(const TriMesh& m) {
  Workspace ws(m, false);
  ws.update();
  std::vector<double> h(m.vertices.size(), 0.0);
  for (std::size_t v = 0; v < m.vertices.size(); ++v)
    if (!m.boundary[v] && ws.mixed[v] > 0) h[v] = std::abs(ws.gn[v]) / (2 * ws.mixed[v]);
  return h;
}

double max_mean_curvature(const TriMesh& m) {
  const auto h = mean_curvature(m);
  return h.empty() ? 0.0 : *std::max_element(h.begin(), h.end());
}

RelaxReport relax(TriMesh& m, const RelaxOptions& opts) {
  RelaxReport rep;
  const int nv = static_cast<int>(m.vertices.size());
  std::vector<int> unknown(nv, -1);
  int nf = 0;
  for (int v = 0; v < nv; ++v)
    if (!m.boundary[v]) unknown[v] = nf++;

  Workspace ws(m, opts.parallel);
  double area = ws.area();
  rep.initial_area = area;
  rep.area_history.push_back(area);
  ws.update();
  rep.initial_residual = rep.residual = ws.residual();
  rep.residual_history.push_back(rep.residual);

  std::vector<double> phi;
  std::vector<Vec3> dir(nv, Vec3::Zero()), saved(m.vertices);
  std::vector<Vec3> old_normals(m.triangles.size());

  while (true) {
    if (rep.residual <= opts.tol_H) {
      rep.converged = true;
      rep.stop_reason = "residual below tolerance";
      break;
    }
    if (rep.iterations >= opts.max_iters) {
      rep.stop_reason = "iteration cap reached";
      break;
    }
    for (std::size_t t = 0; t < m.triangles.size(); ++t) old_normals[t] = normal_of(m, m.triangles[t]);
    saved = m.vertices;

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      const bool use_pc = attempt == 0 && opts.preconditioned;
      if (!use_pc && attempt == 0) continue;
      if (use_pc) {
        if (!preconditioned_direction(m, unknown, nf, ws.gn, phi)) continue;
      } else {
        phi.assign(nv, 0.0);
        for (int v = 0; v < nv; ++v)
          if (unknown[v] >= 0 && ws.mixed[v] > 0) phi[v] = -ws.gn[v] / ws.mixed[v];
      }
      for (int v = 0; v < nv; ++v) dir[v] = unknown[v] >= 0 ? Vec3(phi[v] * ws.normal[v]) : Vec3::Zero();
      double slope = 0, dmax = 0;
      for (int v = 0; v < nv; ++v) {
        if (unknown[v] < 0) continue;
        slope += ws.grad[v].dot(dir[v]);
        dmax = std::max(dmax, dir[v].norm());
      }
      if (!(slope < 0) || dmax == 0) continue;
      double alpha = 1.0;
      if (opts.max_step > 0 && dmax > opts.max_step) alpha = opts.max_step / dmax;
      for (int halving = 0; halving < 50; ++halving, alpha *= 0.5) {
        for (int v = 0; v < nv; ++v)
          if (unknown[v] >= 0) m.vertices[v] = saved[v] + alpha * dir[v];
        bool inverted = false;
        for (std::size_t t = 0; t < m.triangles.size() && !inverted; ++t)
          inverted = normal_of(m, m.triangles[t]).dot(old_normals[t]) <= 0;
        if (inverted) continue;
        const double trial = ws.area();
        if (trial <= area + 1e-4 * alpha * slope) {
          area = trial;
          accepted = true;
          break;
        }
      }
      if (!accepted) m.vertices = saved;
    }
    if (!accepted) {
      rep.stop_reason = "line search stalled";
      break;
    }
    ++rep.iterations;
    rep.area_history.push_back(area);
    ws.update();
    rep.residual = ws.residual();
    rep.residual_history.push_back(rep.residual);
  }
  rep.final_area = area;
  rep.min_angle_deg = min_angle_deg(m);
  return rep;
}

GraphCheck graph_check(const TriMesh& m, std::span<const Vec2> disk_centers, double rho, double x_threshold) {
  GraphCheck g;
  for (const auto& t : m.triangles) {
    const Vec3 c = (m.vertices[t[0]] + m.vertices[t[1]] + m.vertices[t[2]]) / 3.0;
    bool excluded = false;
    for (const auto& p : disk_centers) excluded = excluded || (c.head<2>() - p).norm() < rho;
    if (excluded) continue;
    const Vec3 n = normal_of(m, t);
    const double len = n.norm();
    if (len == 0) continue;
    const double nz = std::abs(n.z()) / len;
    ++g.checked;
    if (nz < g.worst) {
      g.worst = nz;
      g.worst_at = c;
    }
  }
  g.pass = g.worst >= x_threshold;
  return g;
}

HelicoidFit helicoid_fit(const TriMesh& m, const Vec2& center, double rho, double t) {
  std::vector<double> phi, r, z;
  for (const auto& x : m.vertices) {
    const Vec2 d = x.head<2>() - center;
    const double rr = d.norm();
    if (rr > rho) continue;
    // A helicoid meets each line through the axis at angles theta and theta + pi.
    double a = std::atan2(d.y(), d.x());
    a = std::fmod(a + 2 * kPi, kPi);
    phi.push_back(rr > 0 ? a : -1.0);
    r.push_back(rr);
    z.push_back(x.z());
  }
  HelicoidFit fit;
  fit.samples = static_cast<int>(z.size());
  if (fit.samples < 8) throw numerical_error("too few vertices inside the helicoid cylinder");

  // Cut the angle range mod pi in its widest empty gap.
  std::vector<double> sorted;
  for (double a : phi)
    if (a >= 0) sorted.push_back(a);
  std::sort(sorted.begin(), sorted.end());
  double cut = 0, gap = -1;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double next = i + 1 < sorted.size() ? sorted[i + 1] : sorted.front() + kPi;
    if (next - sorted[i] > gap) {
      gap = next - sorted[i];
      cut = sorted[i] + 0.5 * gap;
    }
  }
  std::vector<double> psi(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    psi[i] = phi[i] < 0 ? -1.0 : std::fmod(phi[i] - cut + 2 * kPi, kPi);

  // Weighted least squares on the vertical misfit; the weight turns it into a
  // normal distance, |grad(z - c psi)| = sqrt(1 + c^2 / r^2).
  double c = 0, z0 = 0;
  for (int pass = 0; pass < 8; ++pass) {
    Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
    Eigen::Vector2d b = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (psi[i] < 0) continue;
      const double w = 1.0 / (1.0 + c * c / std::max(r[i] * r[i], 1e-300));
      A(0, 0) += w * psi[i] * psi[i];
      A(0, 1) += w * psi[i];
      A(1, 1) += w;
      b(0) += w * psi[i] * z[i];
      b(1) += w * z[i];
    }
    A(1, 0) = A(0, 1);
    const Eigen::Vector2d sol = A.ldlt().solve(b);
    c = sol(0);
    z0 = sol(1);
  }
  double ss = 0;
  int n = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (psi[i] < 0) continue;  // axis points lie on every helicoid with this axis
    const double w = 1.0 / (1.0 + c * c / std::max(r[i] * r[i], 1e-300));
    const double e = z[i] - c * psi[i] - z0;
    ss += w * e * e;
    ++n;
  }
  fit.pitch = c;
  fit.phase = z0 - c * cut;  // in terms of the unwrapped angle
  fit.residual = std::sqrt(ss / std::max(n, 1)) / t;
  return fit;
}

namespace {

// Min over `from` layer vertices of sign * (z_from - z_to(xy)).
void gaps(const TriMesh& from, int from_sheet, const TriMesh& to, int to_sheet, double sign, SeparationCheck& s) {
  std::vector<char> use(from.vertices.size(), 0);
  for (std::size_t t = 0; t < from.triangles.size(); ++t)
    if (from.tri_sheet[t] == from_sheet)
      for (int v : from.triangles[t]) use[v] = 1;
  std::vector<int> tris;
  for (std::size_t t = 0; t < to.triangles.size(); ++t)
    if (to.tri_sheet[t] == to_sheet) tris.push_back(static_cast<int>(t));
  for (std::size_t v = 0; v < from.vertices.size(); ++v) {
    if (!use[v] || from.boundary[v]) continue;
    const Vec2 p = from.vertices[v].head<2>();
    for (int t : tris) {
      const auto& tri = to.triangles[t];
      const Vec2 a = to.vertices[tri[0]].head<2>(), b = to.vertices[tri[1]].head<2>(), c = to.vertices[tri[2]].head<2>();
      const double den = cross2(b - a, c - a);
      if (den == 0) continue;
      const double l1 = cross2(p - a, c - a) / den, l2 = cross2(b - a, p - a) / den, l0 = 1 - l1 - l2;
      if (l0 < 0 || l1 < 0 || l2 < 0) continue;
      const double zt = l0 * to.vertices[tri[0]].z() + l1 * to.vertices[tri[1]].z() + l2 * to.vertices[tri[2]].z();
      const double gap = sign * (from.vertices[v].z() - zt);
      if (s.samples == 0 || gap < s.min_gap) s.min_gap = gap;
      ++s.samples;
      break;
    }
  }
}

}  // namespace

SeparationCheck layer_separation(const TriMesh& top, int top_sheet, const TriMesh& bottom, int bottom_sheet) {
  SeparationCheck s;
  gaps(top, top_sheet, bottom, bottom_sheet, 1.0, s);
  gaps(bottom, bottom_sheet, top, top_sheet, -1.0, s);
  s.pass = s.samples > 0 && s.min_gap > 0;
  return s;
}

}  // namespace vatlas
