#include "sgff/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "sgff/errors.hpp"
#include "sgff/quadrature.hpp"

namespace sgff {

int dirac_dense_cutoff = 4200;

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}  // namespace

DiskMesh DiskMesh::build(double radius, int cells_across, int refine_k,
                         const std::vector<Complex>& refine_points) {
  if (radius <= 0.0) throw domain_error("DiskMesh: radius must be positive");
  if (cells_across < 4 || cells_across % 2 != 0)
    throw domain_error("DiskMesh: cells_across must be even and >= 4");
  DiskMesh m;
  m.radius = radius;
  m.cells_across = cells_across;
  m.cell = 2.0 * radius / cells_across;
  m.refine_k = std::max(1, refine_k);
  const double h = m.cell;
  const int k = m.refine_k;
  m.lattice_.assign(static_cast<size_t>(cells_across) * cells_across, -1);
  m.refined_.assign(m.lattice_.size(), false);
  for (int iy = 0; iy < cells_across; ++iy) {
    for (int ix = 0; ix < cells_across; ++ix) {
      const double x = -radius + (ix + 0.5) * h;
      const double y = -radius + (iy + 0.5) * h;
      if (x * x + y * y >= radius * radius) continue;
      const size_t slot = static_cast<size_t>(iy) * cells_across + ix;
      const Complex c(x, y);
      bool refine = false;
      for (const Complex& p : refine_points)
        if (k > 1 && std::abs(c - p) < 3.0 * h) refine = true;
      m.lattice_[slot] = m.size();
      m.refined_[slot] = refine;
      if (refine) {
        // children in row-major order within the parent, so cell_index can
        // address them directly
        for (int b = 0; b < k; ++b)
          for (int a = 0; a < k; ++a) {
            m.centers.emplace_back(x + (a + 0.5) * h / k - 0.5 * h,
                                   y + (b + 0.5) * h / k - 0.5 * h);
            m.areas.push_back(h * h / (k * k));
            m.sides.push_back(h / k);
          }
      } else {
        m.centers.emplace_back(x, y);
        m.areas.push_back(h * h);
        m.sides.push_back(h);
      }
    }
  }
  return m;
}

int DiskMesh::cell_index(Complex p) const {
  const int ix = static_cast<int>(std::floor((p.real() + radius) / cell));
  const int iy = static_cast<int>(std::floor((p.imag() + radius) / cell));
  if (ix < 0 || iy < 0 || ix >= cells_across || iy >= cells_across) return -1;
  const size_t slot = static_cast<size_t>(iy) * cells_across + ix;
  const int base = lattice_[slot];
  if (base < 0 || !refined_[slot]) return base;
  const int k = refine_k;
  const double x0 = -radius + ix * cell, y0 = -radius + iy * cell;
  int a = static_cast<int>(std::floor((p.real() - x0) / (cell / k)));
  int b = static_cast<int>(std::floor((p.imag() - y0) / (cell / k)));
  a = std::min(std::max(a, 0), k - 1);
  b = std::min(std::max(b, 0), k - 1);
  return base + b * k + a;
}

namespace {

bool near_any(Complex z, const std::vector<Complex>& pts, double range) {
  for (const Complex& p : pts)
    if (std::abs(z - p) < range) return true;
  return false;
}

// Average f over the refine_k x refine_k subcell centers of a square cell
// of the given side centered at c.
template <typename F>
auto subcell_average(const DiskMesh& mesh, Complex c, double side, F&& f) -> decltype(f(c)) {
  const int k = mesh.refine_k;
  decltype(f(c)) acc{};
  for (int b = 0; b < k; ++b)
    for (int a = 0; a < k; ++a) {
      const Complex v =
          c + Complex((a + 0.5) * side / k - 0.5 * side, (b + 0.5) * side / k - 0.5 * side);
      acc += f(v);
    }
  return acc / static_cast<double>(k * k);
}

}  // namespace

DiracAssembly DiracAssembly::build(const DiskMesh& mesh, const BranchConfig& cfg) {
  cfg.validate();
  DiracAssembly a;
  a.mesh = &mesh;
  a.cfg = cfg;
  const int n = mesh.size();
  a.rho2.resize(n);
  a.rho2inv.resize(n);
  const double range = 3.0 * mesh.cell;
  for (int i = 0; i < n; ++i) {
    const Complex c = mesh.centers[i];
    if (near_any(c, cfg.punctures, range)) {
      a.rho2[i] = subcell_average(mesh, c, mesh.sides[i],
                                  [&](Complex v) { return abs_rho_sq(cfg, v); });
      a.rho2inv[i] = subcell_average(mesh, c, mesh.sides[i],
                                     [&](Complex v) { return 1.0 / abs_rho_sq(cfg, v); });
    } else {
      a.rho2[i] = abs_rho_sq(cfg, c);
      a.rho2inv[i] = 1.0 / a.rho2[i];
    }
  }
  return a;
}

DiracOperator::DiracOperator(const DiracAssembly& assembly, Winding orientation)
    : mesh_(assembly.mesh), cfg_(assembly.cfg) {
  const int n = mesh_->size();
  switch (orientation) {
    case Winding::Rho:
      rho2_ = assembly.rho2;
      rho2inv_ = assembly.rho2inv;
      break;
    case Winding::InvRho:
      rho2_ = assembly.rho2inv;
      rho2inv_ = assembly.rho2;
      cfg_ = cfg_.inverse();
      break;
    case Winding::One:
      rho2_.setOnes(n);
      rho2inv_.setOnes(n);
      cfg_.punctures.clear();
      cfg_.windings.clear();
      break;
  }
  const Eigen::Map<const Eigen::VectorXd> areas(mesh_->areas.data(), n);
  d1s_ = (areas.array() * rho2_.array()).sqrt();
  d2s_ = (areas.array() * rho2inv_.array()).sqrt();
  use_llt_ = n <= dirac_dense_cutoff;

  // Unit-mass B; the mass rescales it linearly.  The entries use cell-center
  // Cauchy factors with the cell-averaged weights: keeping the plain product
  // form preserves the exact discrete skew-adjointness, and with it the
  // Green's function symmetries, to machine precision.
  B_.resize(n, n);
  const double pref = -1.0 / kTwoPi;
  for (int j = 0; j < n; ++j) {
    const Complex uj = mesh_->centers[j];
    const double cj = pref * d1s_[j];
    for (int i = 0; i < n; ++i) {
      B_(i, j) = i == j ? Complex(0.0) : cj * d2s_[i] / (mesh_->centers[i] - uj);
    }
  }
}

void DiracOperator::ensure_gram() const {
  if (gram_ready_) return;
  const int n = size();
  gram_.setZero(n, n);
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(B_);
  gram_ = gram_.selfadjointView<Eigen::Lower>();
  gram_ready_ = true;
}

Eigen::VectorXcd DiracOperator::solve_normal(const Eigen::VectorXcd& rhs, double mu) const {
  const double m2 = mu * mu;
  if (use_llt_) {
    if (!llt_ready_ || llt_mass_ != mu) {
      ensure_gram();
      const int n = size();
      Eigen::MatrixXcd normal = m2 * gram_;
      normal.diagonal().array() += 1.0;
      llt_.compute(normal);
      if (llt_.info() != Eigen::Success)
        throw conditioning_error("DiracOperator: Cholesky factorization failed");
      llt_ready_ = true;
      llt_mass_ = mu;
    }
    return llt_.solve(rhs);
  }
  // CG on I + mu^2 B B^H (Hermitian positive definite).
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(rhs.size());
  Eigen::VectorXcd r = rhs;
  Eigen::VectorXcd p = r;
  double rn = r.squaredNorm();
  const double target = 1e-26 * rhs.squaredNorm();
  for (int it = 0; it < 800; ++it) {
    if (rn <= target) return x;
    Eigen::VectorXcd ap = p + m2 * (B_ * (B_.adjoint() * p));
    const double alpha = rn / std::real(p.dot(ap));
    x += alpha * p;
    r -= alpha * ap;
    const double rn_new = r.squaredNorm();
    p = r + (rn_new / rn) * p;
    rn = rn_new;
  }
  if (rn > 1e6 * target)
    throw conditioning_error("DiracOperator: CG failed to converge (mesh pathology)");
  return x;
}

Eigen::VectorXcd DiracOperator::source_kernel(Complex w) const {
  const int n = size();
  Eigen::VectorXcd rw(n);
  const double range = 3.0 * mesh_->cell;
  for (int v = 0; v < n; ++v) {
    const Complex uv = mesh_->centers[v];
    const double d = std::abs(uv - w);
    if (d < 1e-14) {
      // Source at a cell center: the self-cell Cauchy weight vanishes by
      // the antisymmetry of 1/(v - w) over the centered square.
      rw[v] = 0.0;
      continue;
    }
    if (d < range || near_any(uv, cfg_.punctures, range)) {
      rw[v] = subcell_average(*mesh_, uv, mesh_->sides[v], [&](Complex x) -> Complex {
        const double dd = std::abs(x - w);
        if (dd < 1e-12) return 0.0;
        return 1.0 / (abs_rho_sq(cfg_, x) * (x - w));
      });
    } else {
      rw[v] = rho2inv_[v] / (uv - w);
    }
  }
  return rw;
}

Eigen::VectorXcd DiracOperator::build_h2(Complex w, double mu) const {
  const int n = size();
  const Eigen::VectorXcd rw = source_kernel(w);
  // g_j = (1/(2 pi)^2) sum_{v != j} A_v / conj(u_j - u_v) * rw_v
  Eigen::VectorXcd g(n);
  for (int j = 0; j < n; ++j) {
    const Complex uj = mesh_->centers[j];
    Complex acc = 0.0;
    for (int v = 0; v < n; ++v) {
      if (v == j) continue;
      acc += mesh_->areas[v] * rw[v] / std::conj(uj - mesh_->centers[v]);
    }
    g[j] = acc / (kTwoPi * kTwoPi);
  }
  // h2_i = (mu^2 / 2 pi) sum_{j != i} A_j rho2_j / (u_i - u_j) g_j
  Eigen::VectorXcd h2(n);
  for (int i = 0; i < n; ++i) {
    const Complex ui = mesh_->centers[i];
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      acc += mesh_->areas[j] * rho2_[j] * g[j] / (ui - mesh_->centers[j]);
    }
    h2[i] = acc * mu * mu / kTwoPi;
  }
  return h2;
}

void DiracOperator::solve_source(Complex w, double mu, Eigen::VectorXcd& delta11,
                                 Eigen::VectorXcd& delta21) const {
  const int n = size();
  if (mu == 0.0) {
    delta11.setZero(n);
    delta21.setZero(n);
    return;
  }
  const Eigen::VectorXcd h2 = build_h2(w, mu);
  // Delta_21 = D2^{-1/2} (I + mu^2 B B^H)^{-1} D2^{1/2} h2
  Eigen::VectorXcd rhs = d2s_.asDiagonal() * h2;
  Eigen::VectorXcd y = solve_normal(rhs, mu);
  delta21 = d2s_.cwiseInverse().asDiagonal() * y;
  // Delta_11 = K12 Delta_21 = -mu D1^{-1/2} B^H y
  delta11 = -mu * (d1s_.cwiseInverse().asDiagonal() * (B_.adjoint() * y));
}

Eigen::VectorXcd DiracOperator::delta11_diagonal_all_sources(double mu) const {
  const int n = size();
  if (mu == 0.0) return Eigen::VectorXcd::Zero(n);
  if (!use_llt_)
    throw domain_error("delta11_diagonal_all_sources: mesh too large for the dense path");
  solve_normal(Eigen::VectorXcd::Zero(n), mu);  // refresh the factorization
  // T = D2^{1/2} c with c the plain center Cauchy matrix.
  Eigen::MatrixXcd T(n, n);
  for (int q = 0; q < n; ++q) {
    const Complex uq = mesh_->centers[q];
    for (int i = 0; i < n; ++i)
      T(i, q) = i == q ? Complex(0.0) : d2s_[i] / (mesh_->centers[i] - uq);
  }
  // W = (I + mu^2 P)^{-1} mu^2 P T; diag Delta_11 = -(mu/2pi) D1^{-1/2} diag(B^H W) / mu
  // combined: Delta_11 diag_q = (1/2pi) D1^{-1/2}_q (B^H W)_qq with
  // W = (I + mu^2 P)^{-1} mu^3 B B^H T... kept explicit below.
  Eigen::MatrixXcd U = B_.adjoint() * T;
  T.noalias() = B_ * U;  // now T = P D2^{1/2} c
  Eigen::MatrixXcd W = llt_.solve(T);
  // Delta_21(all sources) = -(mu^2/2pi) D2^{-1/2} (I + mu^2 P)^{-1} P D2^{1/2} c
  // Delta_11 = -mu D1^{-1/2} B^H D2^{1/2} Delta_21
  //          = (mu^3/2pi) D1^{-1/2} B^H (I + mu^2 P)^{-1} P D2^{1/2} c
  Eigen::VectorXcd diag(n);
  const double pref = mu * mu * mu / kTwoPi;
  for (int q = 0; q < n; ++q) diag[q] = pref * B_.col(q).dot(W.col(q)) / d1s_[q];
  return diag;
}

Complex DiracOperator::double_cauchy(Complex z, Complex w) const {
  const int n = size();
  const double range = 3.0 * mesh_->cell;
  Complex acc = 0.0;
  for (int v = 0; v < n; ++v) {
    const Complex uv = mesh_->centers[v];
    if (std::abs(uv - z) < range || std::abs(uv - w) < range ||
        near_any(uv, cfg_.punctures, range)) {
      acc += mesh_->areas[v] *
             subcell_average(*mesh_, uv, mesh_->sides[v], [&](Complex x) -> Complex {
               if (std::abs(x - z) < 1e-12 || std::abs(x - w) < 1e-12) return 0.0;
               return 1.0 / (abs_rho_sq(cfg_, x) * std::conj(z - x) * (x - w));
             });
    } else {
      acc += mesh_->areas[v] * rho2inv_[v] / (std::conj(z - uv) * (uv - w));
    }
  }
  return acc;
}

Eigen::VectorXcd DiracOperator::double_cauchy_column(Complex w) const {
  const int n = size();
  const Eigen::VectorXcd rw = source_kernel(w);
  Eigen::VectorXcd h(n);
  for (int i = 0; i < n; ++i) {
    const Complex ui = mesh_->centers[i];
    Complex acc = 0.0;
    for (int v = 0; v < n; ++v) {
      if (v == i) continue;
      acc += mesh_->areas[v] * rw[v] / std::conj(ui - mesh_->centers[v]);
    }
    h[i] = acc;
  }
  return h;
}

Eigen::VectorXcd build_h(const DiskMesh& mesh, const BranchConfig& cfg, double mu, Complex w) {
  if (mesh.cell_index(w) < 0) throw domain_error("build_h: source outside the mesh");
  DiracAssembly assembly = DiracAssembly::build(mesh, cfg);
  DiracOperator op(assembly, Winding::Rho);
  if (mu == 0.0) return Eigen::VectorXcd::Zero(mesh.size());
  return op.build_h2(w, mu);
}

GreenSolution solve_green(const DiskMesh& mesh, const BranchConfig& cfg, double mu, Complex w) {
  if (mesh.cell_index(w) < 0) throw domain_error("solve_green: source outside the mesh");
  GreenSolution sol;
  sol.mesh = &mesh;
  sol.cfg = cfg;
  sol.mu = mu;
  sol.w = w;
  DiracAssembly assembly = DiracAssembly::build(mesh, cfg);
  DiracOperator op_rho(assembly, Winding::Rho);
  DiracOperator op_inv(assembly, Winding::InvRho);
  op_rho.solve_source(w, mu, sol.d11_rho, sol.d21_rho);
  op_inv.solve_source(w, mu, sol.d11_inv, sol.d21_inv);
  return sol;
}

namespace {

// Interpolation of a cell-center field: exact at centers, otherwise inverse
// distance weighting over the surrounding centers (the mesh is locally
// nonuniform near punctures, so a fixed bilinear stencil does not apply).
Complex interpolate(const DiskMesh& mesh, const Eigen::VectorXcd& field, Complex z) {
  int nearest = -1;
  double dmin = 1e300;
  double wsum = 0.0;
  Complex acc = 0.0;
  const double range = 1.3 * mesh.cell;
  for (int i = 0; i < mesh.size(); ++i) {
    const double d = std::abs(mesh.centers[i] - z);
    if (d < dmin) {
      dmin = d;
      nearest = i;
    }
    if (d < range) {
      const double wgt = 1.0 / (d * d + 1e-300);
      acc += wgt * field[i];
      wsum += wgt;
    }
  }
  if (nearest < 0) throw domain_error("reconstruct_s: point outside the mesh");
  if (dmin < 1e-9 * mesh.cell) return field[nearest];
  if (wsum <= 0.0) return field[nearest];
  return acc / wsum;
}

}  // namespace

Eigen::Matrix2cd reconstruct_s(const GreenSolution& sol, Complex z) {
  const BranchConfig& cfg = sol.cfg;
  const Complex w = sol.w;
  if (std::abs(z - w) < 1e-14) throw domain_error("reconstruct_s: z = w is singular");
  const Complex rz = rho(cfg, z), rw = rho(cfg, w);
  Eigen::Matrix2cd s;
  const Complex d11r = interpolate(*sol.mesh, sol.d11_rho, z);
  const Complex d21r = interpolate(*sol.mesh, sol.d21_rho, z);
  const Complex d11i = interpolate(*sol.mesh, sol.d11_inv, z);
  const Complex d21i = interpolate(*sol.mesh, sol.d21_inv, z);

  Complex h_rho = 0.0, h_inv = 0.0;
  if (sol.mu != 0.0) {
    DiracAssembly assembly = DiracAssembly::build(*sol.mesh, cfg);
    DiracOperator op_rho(assembly, Winding::Rho);
    DiracOperator op_inv(assembly, Winding::InvRho);
    h_rho = op_rho.double_cauchy(z, w);
    h_inv = op_inv.double_cauchy(z, w);
  }

  // First column from the rho solve.
  s(0, 0) = std::conj(rz) * rw * (-sol.mu / (kTwoPi * kTwoPi) * h_rho + d11r);
  s(1, 0) = rw / rz * (1.0 / (kTwoPi * (z - w)) + d21r);
  // Second column by conjugation with negated windings.
  s(0, 1) = std::conj(rz) / std::conj(rw) *
            (1.0 / (kTwoPi * std::conj(z - w)) + std::conj(d21i));
  s(1, 1) = std::conj(-sol.mu / (kTwoPi * kTwoPi) * h_inv + d11i) / (rz * std::conj(rw));
  return s;
}

Complex log_deriv_branch(const DiskMesh& mesh, const BranchConfig& cfg, double mu, int j,
                         int mass_nodes) {
  cfg.validate();
  if (!cfg.neutral()) throw domain_error("log_deriv_branch: configuration must be neutral");
  if (j < 0 || j >= cfg.size()) throw domain_error("log_deriv_branch: puncture index");
  const Complex xj = cfg.punctures[j];
  if (std::abs(xj) >= mesh.radius - mesh.cell)
    throw domain_error("log_deriv_branch: puncture within one cell of the disk boundary");
  if (cfg.windings[j] == 0.0 || mu == 0.0) return 0.0;

  DiracAssembly assembly = DiracAssembly::build(mesh, cfg);
  DiracOperator op_rho(assembly, Winding::Rho);
  DiracOperator op_inv(assembly, Winding::InvRho);
  const int n = mesh.size();

  // H^rho(u_i, x_j) and the Cauchy factor 1/(2 pi (x_j - u)); near the
  // puncture both are averaged jointly with |rho|^2 over subcells.
  const Eigen::VectorXcd hj = op_rho.double_cauchy_column(xj);
  const double range = 3.0 * mesh.cell;
  Eigen::VectorXcd cauchy(n);      // cell average of rho2 / (2 pi (x_j - u))
  Eigen::VectorXcd lin(n);         // cell average of rho2 (-H/(2pi)^2) / (2pi (x_j - u))
  Eigen::VectorXd rho2_cell = Eigen::VectorXd(assembly.rho2);
  for (int i = 0; i < n; ++i) {
    const Complex ui = mesh.centers[i];
    if (std::abs(ui - xj) < range) {
      cauchy[i] = subcell_average(mesh, ui, mesh.sides[i], [&](Complex v) -> Complex {
        return abs_rho_sq(cfg, v) / (kTwoPi * (xj - v));
      });
      lin[i] = subcell_average(mesh, ui, mesh.sides[i], [&](Complex v) -> Complex {
        return abs_rho_sq(cfg, v) * (-op_rho.double_cauchy(v, xj) / (kTwoPi * kTwoPi)) /
               (kTwoPi * (xj - v));
      });
    } else {
      cauchy[i] = rho2_cell[i] / (kTwoPi * (xj - ui));
      lin[i] = rho2_cell[i] * (-hj[i] / (kTwoPi * kTwoPi)) / (kTwoPi * (xj - ui));
    }
  }

  // Mass-linear part integrates to mu^2/2 exactly.
  Complex acc = 0.0;
  for (int i = 0; i < n; ++i) acc += mesh.areas[i] * lin[i];
  acc *= 0.5 * mu * mu;

  const QuadratureRule srule = gauss_legendre(mass_nodes, 0.0, mu);
  Eigen::VectorXcd d11r, d21r, d11i_, d21i_;
  for (int is = 0; is < srule.size(); ++is) {
    const double s = srule.nodes[is];
    op_rho.solve_source(xj, s, d11r, d21r);
    op_inv.solve_source(xj, s, d11i_, d21i_);
    Complex term = 0.0;
    for (int i = 0; i < n; ++i) {
      // full product minus the analytically integrated mass-linear part
      const Complex left = -s * hj[i] / (kTwoPi * kTwoPi) + d11r[i];
      const Complex right_delta = -d21i_[i];  // Delta_21(x_j, u) = -Delta~_21(u, x_j)
      term += mesh.areas[i] * (rho2_cell[i] * left * right_delta + d11r[i] * cauchy[i]);
    }
    acc += srule.weights[is] * term;
  }
  return 4.0 * M_PI * cfg.windings[j] * acc;
}

LogZTilde log_z_tilde(const DiskMesh& mesh, const BranchConfig& cfg, double mu,
                      int mass_nodes) {
  cfg.validate();
  if (!cfg.neutral()) throw domain_error("log_z_tilde: configuration must be neutral");
  if (mass_nodes < 4) throw domain_error("log_z_tilde: needs >= 4 mass quadrature nodes");
  if (mesh.size() > 10000)
    std::cerr << "log_z_tilde: warning, " << mesh.size() << " cells will be slow\n";
  LogZTilde out;
  if (mu == 0.0) return out;

  DiracAssembly assembly = DiracAssembly::build(mesh, cfg);
  const int n = mesh.size();

  // Mass-linear singular part: (1/(2pi)^2) int du int dv chi chi
  // (r + 1/r - 2)/|u - v|^2 with r = |rho(u)|^2/|rho(v)|^2, self-pair
  // excluded; the excluded cell contributes (side^2/4) |grad log |rho|^2|^2
  // per channel at leading order (the Laplacian term vanishes because
  // log|u - x| is harmonic away from x).
  double singular = 0.0;
  for (int q = 0; q < n; ++q) {
    const Complex uq = mesh.centers[q];
    double inner = 0.0;
    for (int v = 0; v < n; ++v) {
      if (v == q) continue;
      const double ratio = assembly.rho2[q] / assembly.rho2[v];
      inner += mesh.areas[v] * (ratio + 1.0 / ratio - 2.0) / std::norm(uq - mesh.centers[v]);
    }
    Complex grad = 0.0;
    for (int m = 0; m < cfg.size(); ++m)
      grad += 2.0 * cfg.windings[m] / std::conj(uq - cfg.punctures[m]);
    inner += 0.5 * mesh.sides[q] * mesh.sides[q] * std::norm(grad);
    singular += mesh.areas[q] * inner;
  }
  singular /= kTwoPi * kTwoPi;

  DiracOperator op_rho(assembly, Winding::Rho);
  DiracOperator op_inv(assembly, Winding::InvRho);
  DiracOperator op_one(assembly, Winding::One);

  const QuadratureRule srule = gauss_legendre(mass_nodes, 0.0, mu);
  std::complex<double> acc = 0.5 * mu * mu * singular;
  for (int is = 0; is < srule.size(); ++is) {
    const double s = srule.nodes[is];
    const Eigen::VectorXcd diag_rho = op_rho.delta11_diagonal_all_sources(s);
    const Eigen::VectorXcd diag_inv = op_inv.delta11_diagonal_all_sources(s);
    const Eigen::VectorXcd diag_one = op_one.delta11_diagonal_all_sources(s);
    std::complex<double> term = 0.0;
    for (int q = 0; q < n; ++q) {
      term += mesh.areas[q] * (assembly.rho2[q] * diag_rho[q] +
                               assembly.rho2inv[q] * diag_inv[q] - 2.0 * diag_one[q]);
    }
    acc += srule.weights[is] * term;
  }
  out.value = acc.real();
  out.imag_ratio = std::abs(acc.imag()) / std::max(std::abs(acc.real()), 1e-300);
  return out;
}

double factorization_residual(const DiskMesh& mesh, const BranchConfig& cfg, double mu, int j,
                              Complex z, Complex w, double delta) {
  cfg.validate();
  if (j < 0 || j >= cfg.size()) throw domain_error("factorization_residual: puncture index");
  if (cfg.windings[j] == 0.0) return 0.0;
  if (mu != 0.0 && delta < 0.5 * mesh.cell)
    throw domain_error("factorization_residual: step below mesh resolution");
  const Complex xj = cfg.punctures[j];

  // Holomorphic derivative d/dx_j by the Wirtinger combination of central
  // differences along the real and imaginary directions.
  auto s_at = [&](Complex shift) {
    BranchConfig moved = cfg;
    moved.punctures[j] += shift;
    if (mu == 0.0) return Eigen::Matrix2cd(s0_green(moved, z, w));
    return Eigen::Matrix2cd(reconstruct_s(solve_green(mesh, moved, mu, w), z));
  };
  const Eigen::Matrix2cd fd_re = (s_at(delta) - s_at(-delta)) / (2.0 * delta);
  const Eigen::Matrix2cd fd_im =
      (s_at(Complex(0.0, delta)) - s_at(Complex(0.0, -delta))) / (2.0 * delta);
  const Eigen::Matrix2cd fd = 0.5 * (fd_re - Complex(0.0, 1.0) * fd_im);

  // Factorized side: 2 pi alpha_j times the outer product of
  // lim_{w'->x_j} S(z, w')/rho(w') and lim_{z'->x_j} rho(z') (S_21, S_22)(z', w).
  const Complex rz = rho(cfg, z), rw = rho(cfg, w);
  Eigen::Vector2cd col;
  Eigen::RowVector2cd row;
  if (mu == 0.0) {
    col << 0.0, (1.0 / rz) / (kTwoPi * (z - xj));
    row << rw / (kTwoPi * (xj - w)), 0.0;
  } else {
    DiracAssembly assembly = DiracAssembly::build(mesh, cfg);
    DiracOperator op_rho(assembly, Winding::Rho);
    DiracOperator op_inv(assembly, Winding::InvRho);

    // Column limit from the solve with source at the puncture.
    Eigen::VectorXcd d11r, d21r, d11i_, d21i_;
    op_rho.solve_source(xj, mu, d11r, d21r);
    op_inv.solve_source(xj, mu, d11i_, d21i_);
    const Complex d11_z = interpolate(mesh, d11r, z);
    const Complex d21_z = interpolate(mesh, d21r, z);
    col << std::conj(rz) * (-mu / (kTwoPi * kTwoPi) * op_rho.double_cauchy(z, xj) + d11_z),
        (1.0 / rz) * (1.0 / (kTwoPi * (z - xj)) + d21_z);

    // Row limit via the adjoint symmetries: Delta_21(x_j, w) equals
    // -Delta~_21(w, x_j) and Delta~_11(x_j, w) = conj(Delta~_11(w, x_j)),
    // both read off the same puncture-source solves away from the puncture.
    const Complex d21_xj_w = -interpolate(mesh, d21i_, w);
    const Complex d11inv_xj_w = std::conj(interpolate(mesh, d11i_, w));
    row << rw * (1.0 / (kTwoPi * (xj - w)) + d21_xj_w),
        (1.0 / std::conj(rw)) *
            std::conj(-mu / (kTwoPi * kTwoPi) * op_inv.double_cauchy(xj, w) + d11inv_xj_w);
  }
  Eigen::Matrix2cd outer = kTwoPi * cfg.windings[j] * (col * row);
  return (fd - outer).norm() / std::max(outer.norm(), 1e-300);
}

}  // namespace sgff
