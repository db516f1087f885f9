#include "contlim/projectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

#include "contlim/random.hpp"

namespace contlim {

namespace {

// Superoperator of X -> tr_2(X) (x) sigma on C^{dk} (x) C^{mk}.
CMatrix trace_and_replace(Index dk, const CMatrix& sigma) {
  const Index m = sigma.rows();
  const Index n = dk * m;
  CMatrix t = CMatrix::Zero(n * n, n * n);
  for (Index j = 0; j < dk; ++j)
    for (Index jp = 0; jp < dk; ++jp)
      for (Index a = 0; a < m; ++a)
        for (Index ap = 0; ap < m; ++ap)
          for (Index s = 0; s < m; ++s)
            t((j * m + a) * n + (jp * m + ap), (j * m + s) * n + (jp * m + s)) += sigma(a, ap);
  return t;
}

CMatrix sorted_desc(const CMatrix& herm, CMatrix* vectors = nullptr) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(herm));
  const Index n = herm.rows();
  CMatrix values(n, 1);
  if (vectors) *vectors = CMatrix(n, n);
  for (Index i = 0; i < n; ++i) {
    values(i, 0) = es.eigenvalues()(n - 1 - i);
    if (vectors) vectors->col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return values;
}

std::vector<std::vector<Index>> clusters_of(const RVector& values) {
  std::vector<Complex> v(static_cast<std::size_t>(values.size()));
  for (Index i = 0; i < values.size(); ++i) v[static_cast<std::size_t>(i)] = values(i);
  return cluster_values(v);
}

CMatrix columns(const CMatrix& m, const std::vector<Index>& idx) {
  CMatrix out(m.rows(), static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out.col(static_cast<Index>(i)) = m.col(idx[i]);
  return out;
}

CMatrix random_combination(Rng& rng, const std::vector<CMatrix>& elements, bool hermitian) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix out = CMatrix::Zero(elements.front().rows(), elements.front().cols());
  for (const auto& e : elements) {
    if (hermitian) out += normal(rng) * hermitian_part(e);
    else out += Complex(normal(rng), normal(rng)) * e;
  }
  return out;
}

}  // namespace

void ProjectorCanonicalForm::validate(double tol) const {
  if (dim < 1) throw ShapeError("ProjectorCanonicalForm: dim must be positive");
  if (d0 < 0) throw ShapeError("ProjectorCanonicalForm: negative d0");
  if (basis_change.rows() != dim || basis_change.cols() != dim) throw ShapeError("ProjectorCanonicalForm: U has the wrong shape");
  if ((basis_change.adjoint() * basis_change - CMatrix::Identity(dim, dim)).norm() > 1e-10)
    throw PreconditionError("ProjectorCanonicalForm: U is not unitary");
  Index total = d0;
  for (const auto& b : blocks) {
    if (b.dk < 1 || b.mk < 1) throw ShapeError("ProjectorCanonicalForm: block sizes must be positive");
    if (b.sigma.rows() != b.mk || b.sigma.cols() != b.mk) throw ShapeError("ProjectorCanonicalForm: sigma has the wrong shape");
    if (!is_hermitian(b.sigma, 1e-10)) throw PreconditionError("ProjectorCanonicalForm: sigma is not Hermitian");
    if (std::abs(b.sigma.trace() - Complex(1.0)) > std::max(tol, 1e-9))
      throw PreconditionError("ProjectorCanonicalForm: sigma does not have unit trace");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(b.sigma), Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) <= 0.0) throw PreconditionError("ProjectorCanonicalForm: sigma is not positive definite");
    total += b.dk * b.mk;
  }
  if (total != dim) throw ShapeError("ProjectorCanonicalForm: block dimensions do not add up to dim");
}

Index ProjectorCanonicalForm::block_offset(std::size_t k) const {
  Index offset = d0;
  for (std::size_t i = 0; i < k; ++i) offset += blocks[i].dk * blocks[i].mk;
  return offset;
}

CMatrix ProjectorCanonicalForm::block_isometry(std::size_t k) const {
  return basis_change.middleCols(block_offset(k), blocks[k].dk * blocks[k].mk);
}

SuperOp build_projector(const ProjectorCanonicalForm& cf) {
  cf.validate();
  if (cf.d0 != 0) throw PreconditionError("build_projector: D_0 > 0 does not determine a trace-preserving projector");
  const Index n = cf.dim * cf.dim;
  SuperOp p{cf.dim, CMatrix::Zero(n, n)};
  for (std::size_t k = 0; k < cf.blocks.size(); ++k) {
    const CMatrix v = cf.block_isometry(k);
    const CMatrix t = trace_and_replace(cf.blocks[k].dk, cf.blocks[k].sigma);
    p.matrix += kron(v, v.conjugate()) * t * kron(v.adjoint(), v.transpose());
  }
  return p;
}

ProjectorCanonicalForm canonical_form(const SuperOp& p, double tol, std::uint64_t seed) {
  if (!is_projector_channel(p, tol)) throw PreconditionError("canonical_form: input is not a projector channel");
  const Index d = p.dim;
  const double rank_tol = std::max(tol, 1e-12);
  Rng rng(seed);

  // Support of the image of the maximally mixed state.
  CMatrix rho_vectors;
  const CMatrix rho_values = sorted_desc(contlim::apply(p, CMatrix(CMatrix::Identity(d, d) / static_cast<double>(d))), &rho_vectors);
  Index r = 0;
  while (r < d && rho_values(r, 0).real() > rank_tol * rho_values(0, 0).real()) ++r;
  const CMatrix w0 = rho_vectors.leftCols(r);
  const CMatrix zero_block = rho_vectors.rightCols(d - r);
  CMatrix inv_sqrt = CMatrix::Zero(r, r);
  for (Index i = 0; i < r; ++i) inv_sqrt(i, i) = 1.0 / std::sqrt(rho_values(i, 0).real());

  // Fixed points rescaled into the algebra (+)_k M_{D_k} (x) I_{m_k}, in eigenbasis coordinates.
  const SubspaceBasis fixed = range_space(p.matrix, rank_tol);
  std::vector<CMatrix> algebra;
  for (Index j = 0; j < fixed.dim(); ++j) {
    const CMatrix x = unvec(fixed.vectors.col(j), d);
    algebra.push_back(inv_sqrt * w0.adjoint() * x * w0 * inv_sqrt);
  }
  const Index f = static_cast<Index>(algebra.size());

  // Center: combinations commuting with every element.
  CMatrix system(f * r * r, f);
  for (Index i = 0; i < f; ++i)
    for (Index j = 0; j < f; ++j)
      system.block(i * r * r, j, r * r, 1) = vec(algebra[j] * algebra[i] - algebra[i] * algebra[j]);
  double scale = 0.0;
  for (const auto& a : algebra) scale = std::max(scale, a.norm());
  Eigen::JacobiSVD<CMatrix> svd(system, Eigen::ComputeFullV);
  Index rank = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-8 * scale * scale) ++rank;
  SubspaceBasis center_coeffs{f, svd.matrixV().rightCols(f - rank), 1e-8};
  std::vector<CMatrix> center;
  for (Index c = 0; c < center_coeffs.dim(); ++c) {
    CMatrix z = CMatrix::Zero(r, r);
    for (Index j = 0; j < f; ++j) z += center_coeffs.vectors(j, c) * algebra[j];
    center.push_back(z);
  }
  if (center.empty()) throw NumericalError("canonical_form: empty center");

  Eigen::SelfAdjointEigenSolver<CMatrix> zes(random_combination(rng, center, true));
  const auto block_groups = clusters_of(zes.eigenvalues());
  if (static_cast<Index>(block_groups.size()) != center_coeffs.dim())
    throw NumericalError("canonical_form: failed to separate the blocks of the fixed-point algebra");

  struct Found {
    ProjectorBlock block;
    CMatrix isometry;
    Index anchor;
  };
  std::vector<Found> found;
  for (const auto& group : block_groups) {
    const CMatrix e = columns(zes.eigenvectors(), group);
    const Index s = e.cols();
    std::vector<CMatrix> local;
    CMatrix stacked(s * s, f);
    for (Index j = 0; j < f; ++j) {
      local.push_back(e.adjoint() * algebra[j] * e);
      stacked.col(j) = vec(local.back());
    }
    const Index dim_alg = numerical_rank(stacked, 1e-8);
    const Index dk = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(dim_alg))));
    if (dk * dk != dim_alg || s % dk != 0) throw NumericalError("canonical_form: block algebra is not a full matrix algebra");
    const Index mk = s / dk;

    Eigen::SelfAdjointEigenSolver<CMatrix> hes(random_combination(rng, local, true));
    const auto level_groups = clusters_of(hes.eigenvalues());
    if (static_cast<Index>(level_groups.size()) != dk)
      throw NumericalError("canonical_form: failed to resolve the matrix-unit structure of a block");
    for (const auto& lg : level_groups)
      if (static_cast<Index>(lg.size()) != mk) throw NumericalError("canonical_form: inconsistent block multiplicities");

    const CMatrix a = random_combination(rng, local, false);
    const CMatrix g1 = columns(hes.eigenvectors(), level_groups[0]);
    CMatrix basis(s, s);
    for (Index j = 0; j < dk; ++j) {
      const CMatrix gj = columns(hes.eigenvectors(), level_groups[static_cast<std::size_t>(j)]);
      for (Index t = 0; t < mk; ++t) {
        CVector col = j == 0 ? CVector(g1.col(t)) : CVector(gj * (gj.adjoint() * (a * g1.col(t))));
        basis.col(j * mk + t) = col.normalized();
      }
    }
    // Re-orthonormalize against roundoff.
    Eigen::HouseholderQR<CMatrix> qr(basis);
    CMatrix q = qr.householderQ() * CMatrix::Identity(s, s);
    const CMatrix rq = qr.matrixQR();
    for (Index j = 0; j < s; ++j)
      if (std::abs(rq(j, j)) > 0.0) q.col(j) *= rq(j, j) / std::abs(rq(j, j));

    Found fb;
    fb.isometry = w0 * e * q;
    const CMatrix rho_block = fb.isometry.adjoint() * contlim::apply(p, CMatrix(CMatrix::Identity(d, d))) * fb.isometry;
    CMatrix sigma = CMatrix::Zero(mk, mk);
    for (Index j = 0; j < dk; ++j) sigma += rho_block.block(j * mk, j * mk, mk, mk);
    sigma = hermitian_part(sigma);
    sigma /= sigma.trace().real();
    fb.block = {dk, mk, sigma};
    const CMatrix proj = fb.isometry * fb.isometry.adjoint();
    Index anchor = 0;
    for (Index i = 1; i < d; ++i)
      if (proj(i, i).real() > proj(anchor, anchor).real() + 1e-9) anchor = i;
    fb.anchor = anchor;
    found.push_back(std::move(fb));
  }

  auto key = [](const Found& x) {
    const CMatrix ev = sorted_desc(x.block.sigma);
    std::vector<double> fp;
    for (Index i = 0; i < ev.rows(); ++i) fp.push_back(std::round(ev(i, 0).real() * 1e9) / 1e9);
    return std::make_tuple(x.block.dk, x.block.mk, fp, x.anchor);
  };
  std::stable_sort(found.begin(), found.end(), [&](const Found& x, const Found& y) { return key(x) < key(y); });

  ProjectorCanonicalForm cf;
  cf.dim = d;
  cf.d0 = d - r;
  cf.basis_change = CMatrix(d, d);
  cf.basis_change.leftCols(cf.d0) = zero_block;
  Index offset = cf.d0;
  for (const auto& fb : found) {
    cf.basis_change.middleCols(offset, fb.isometry.cols()) = fb.isometry;
    offset += fb.isometry.cols();
    cf.blocks.push_back(fb.block);
  }
  return cf;
}

Lindblad thermo_liouvillian(const ProjectorCanonicalForm& cf) {
  cf.validate();
  if (cf.d0 != 0) throw PreconditionError("thermo_liouvillian: D_0 != 0 is not supported");
  Lindblad g = Lindblad::zero(cf.dim);
  const bool several = cf.blocks.size() > 1;
  for (std::size_t k = 0; k < cf.blocks.size(); ++k) {
    const auto& b = cf.blocks[k];
    const CMatrix v = cf.block_isometry(k);
    if (b.mk == 1) {
      if (several) g.jumps.push_back(v * v.adjoint());
      continue;
    }
    CMatrix eig;
    const CMatrix values = sorted_desc(b.sigma, &eig);
    CMatrix down = CMatrix::Zero(b.mk, b.mk);
    CMatrix up = CMatrix::Zero(b.mk, b.mk);
    for (Index i = 0; i + 1 < b.mk; ++i) {
      const double th_i = std::sqrt(std::max(values(i, 0).real(), 0.0));
      const double th_next = std::sqrt(std::max(values(i + 1, 0).real(), 0.0));
      down += th_i * eig.col(i) * eig.col(i + 1).adjoint();
      up += th_next * eig.col(i + 1) * eig.col(i).adjoint();
    }
    const CMatrix id = CMatrix::Identity(b.dk, b.dk);
    g.jumps.push_back(v * kron(id, down) * v.adjoint());
    g.jumps.push_back(v * kron(id, up) * v.adjoint());
  }
  return g;
}

ThermoReport verify_thermo_limit(const SuperOp& p, const Lindblad& g, const std::vector<double>& t_grid, double tol) {
  if (t_grid.empty()) throw PreconditionError("verify_thermo_limit: empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw PreconditionError("verify_thermo_limit: time grid must be increasing");
  if (p.dim != g.dim) throw ShapeError("verify_thermo_limit: dimension mismatch");
  const LiouvillianMatrix l = liouvillian_matrix(g);
  ThermoReport report;
  for (double t : t_grid) {
    report.times.push_back(t);
    report.distances.push_back((channel_at(l, t).matrix - p.matrix).norm());
  }
  const auto& dist = report.distances;
  bool tail_ok = true;
  const std::size_t start = dist.size() >= 3 ? dist.size() - 3 : 0;
  for (std::size_t i = start + 1; i < dist.size(); ++i) tail_ok = tail_ok && dist[i] <= std::max(dist[i - 1], 1e-2 * tol) + 1e-13;
  report.converged = tail_ok && dist.back() <= tol;
  return report;
}

}  // namespace contlim
