#include "contlim/gcmps.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace contlim {

void GeneralizedCmps::validate(double tol) const {
  if (dim < 1) throw ShapeError("GeneralizedCmps: bond dimension must be positive");
  if (ancilla_dim < 1 || static_cast<Index>(boundary.size()) != ancilla_dim)
    throw ShapeError("GeneralizedCmps: K must equal the number of boundary operators");
  for (const auto& b : boundary)
    if (b.rows() != dim || b.cols() != dim) throw ShapeError("GeneralizedCmps: boundary operator has the wrong shape");
  if (hamiltonian.rows() != dim || hamiltonian.cols() != dim) throw ShapeError("GeneralizedCmps: H has the wrong shape");
  if (!is_hermitian(hamiltonian, 1e-10)) throw PreconditionError("GeneralizedCmps: H is not Hermitian");
  for (const auto& r : jumps)
    if (r.rows() != dim || r.cols() != dim) throw ShapeError("GeneralizedCmps: jump operator has the wrong shape");
  if (statistics.size() != jumps.size()) throw ShapeError("GeneralizedCmps: one statistics sign per species required");
  for (int s : statistics)
    if (s != 1 && s != -1) throw PreconditionError("GeneralizedCmps: statistics signs must be +1 or -1");
  if (!is_projector_channel(projector(), std::max(tol, 1e-8)))
    throw PreconditionError("GeneralizedCmps: boundary operators do not form a projector channel");
}

CMatrix GeneralizedCmps::q() const { return q_from(hamiltonian, jumps); }

int GeneralizedCmps::eta(Index alpha, Index beta) const {
  return statistics[static_cast<std::size_t>(alpha)] == -1 && statistics[static_cast<std::size_t>(beta)] == -1 ? -1 : 1;
}

SuperOp GeneralizedCmps::projector() const { return kraus_to_superop({dim, boundary}); }

CMatrix GeneralizedCmps::liouvillian() const { return liouvillian_from_q(q(), jumps); }

CMatrix GeneralizedCmps::liouvillian_species(Index alpha) const {
  const CMatrix qm = q();
  const CMatrix id = CMatrix::Identity(dim, dim);
  CMatrix l = kron(qm, id) + kron(id, qm.conjugate());
  for (Index b = 0; b < species(); ++b) {
    const CMatrix& r = jumps[static_cast<std::size_t>(b)];
    l += static_cast<double>(eta(alpha, b)) * kron(r, r.conjugate());
  }
  return l;
}

CMatrix GeneralizedCmps::liouvillian_pair(Index alpha, Index beta) const {
  const CMatrix qm = q();
  const CMatrix id = CMatrix::Identity(dim, dim);
  CMatrix l = kron(qm, id) + kron(id, qm.conjugate());
  for (Index c = 0; c < species(); ++c) {
    const CMatrix& r = jumps[static_cast<std::size_t>(c)];
    l += static_cast<double>(eta(alpha, c) * eta(beta, c)) * kron(r, r.conjugate());
  }
  return l;
}

double TruncatedState::sector_weight(Index n) const {
  double w = 0.0;
  for (const auto& [config, amp] : amplitudes)
    if (config.particles() == n) w += std::norm(amp);
  return w;
}

GeneralizedCmps from_verdict(const DivisibilityVerdict& verdict, double tol) {
  if (verdict.status != DivisibilityStatus::divisible && verdict.status != DivisibilityStatus::markovian)
    throw PreconditionError(std::string("from_verdict: channel is ") + to_string(verdict.status));
  const SuperOp& p = *verdict.projector;
  const LiouvillianMatrix& l = *verdict.generator;

  GeneralizedCmps g;
  g.dim = p.dim;
  g.boundary = superop_to_kraus(p, tol).kraus;
  g.ancilla_dim = static_cast<Index>(g.boundary.size());
  const Lindblad split = split_generator(l, tol);
  g.hamiltonian = split.hamiltonian;
  g.jumps = split.jumps;
  g.statistics.assign(g.jumps.size(), 1);
  return g;
}

GeneralizedCmps from_mps(const MpsTensor& t, double tol) { return from_verdict(has_continuum_limit(t, tol), tol); }

SuperOp transfer(const GeneralizedCmps& g, double length) {
  if (!(length > 0.0)) throw PreconditionError("transfer: length must be positive");
  return {g.dim, g.projector().matrix * expm(length * g.liouvillian())};
}

double norm_squared(const GeneralizedCmps& g, double length) {
  const Complex tr = transfer(g, length).matrix.trace();
  if (tr.real() < -1e-10) {
    std::ostringstream os;
    os << "norm_squared: negative trace " << tr.real();
    throw NumericalError(os.str());
  }
  return std::max(tr.real(), 0.0);
}

namespace {

void require_species(const GeneralizedCmps& g, Index alpha, const char* what) {
  if (alpha < 0 || alpha >= g.species()) throw PreconditionError(std::string(what) + ": species index out of range");
}

void require_inside(double length, double x, const char* what) {
  if (!(length > 0.0)) throw PreconditionError(std::string(what) + ": length must be positive");
  if (!(x >= 0.0 && x <= length)) throw PreconditionError(std::string(what) + ": coordinate outside the segment");
}

}  // namespace

Complex correlation(const GeneralizedCmps& g, double length, Index alpha, Index beta, double x, double y) {
  require_species(g, alpha, "correlation");
  require_species(g, beta, "correlation");
  require_inside(length, x, "correlation");
  require_inside(length, y, "correlation");
  if (x == y) throw PreconditionError("correlation: coincident points are only available through density");

  const Index d = g.dim;
  const CMatrix id = CMatrix::Identity(d, d);
  const CMatrix& ra = g.jumps[static_cast<std::size_t>(alpha)];
  const CMatrix& rb = g.jumps[static_cast<std::size_t>(beta)];
  const CMatrix p = g.projector().matrix;
  const CMatrix l = g.liouvillian();
  CMatrix chain;
  if (x > y) {
    chain = p * expm(y * g.liouvillian_pair(alpha, beta)) * kron(rb, id) * expm((x - y) * g.liouvillian_species(alpha)) *
            kron(id, ra.conjugate()) * expm((length - x) * l);
  } else {
    chain = p * expm(x * g.liouvillian_pair(beta, alpha)) * kron(id, ra.conjugate()) *
            expm((y - x) * g.liouvillian_species(beta)) * kron(rb, id) * expm((length - y) * l);
  }
  const double norm = norm_squared(g, length);
  if (norm <= 0.0) throw NumericalError("correlation: state has zero norm");
  return chain.trace() / norm;
}

double density(const GeneralizedCmps& g, double length, Index alpha, double x) {
  require_species(g, alpha, "density");
  require_inside(length, x, "density");
  const CMatrix& r = g.jumps[static_cast<std::size_t>(alpha)];
  const CMatrix l = g.liouvillian();
  const CMatrix chain = g.projector().matrix * expm(x * l) * kron(r, r.conjugate()) * expm((length - x) * l);
  const double norm = norm_squared(g, length);
  if (norm <= 0.0) throw NumericalError("density: state has zero norm");
  const double value = chain.trace().real() / norm;
  if (value < -1e-10) throw NumericalError("density: negative density");
  return std::max(value, 0.0);
}

TruncatedState truncated_state(const GeneralizedCmps& g, const Segment& seg, Index grid, Index max_particles) {
  if (grid < 1) throw PreconditionError("truncated_state: grid must be at least 1");
  if (max_particles < 0 || max_particles > kMaxTruncatedParticles)
    throw PreconditionError("truncated_state: max_particles must lie in [0, 4]");
  if (!(seg.end > seg.start)) throw PreconditionError("truncated_state: empty segment");

  // Configuration count guard: K * sum_n C(grid, n) q^n.
  double count = 0.0, binom = 1.0, qpow = 1.0;
  for (Index n = 0; n <= max_particles; ++n) {
    if (n > 0) {
      binom *= static_cast<double>(grid - n + 1) / static_cast<double>(n);
      qpow *= static_cast<double>(g.species());
    }
    count += std::max(binom, 0.0) * qpow;
  }
  if (count * static_cast<double>(g.ancilla_dim) > kMaxTruncatedConfigurations)
    throw PreconditionError("truncated_state: configuration count exceeds the guard");

  TruncatedState st;
  st.segment = seg;
  st.grid_points = grid;
  st.max_particles = max_particles;
  st.step = seg.length() / static_cast<double>(grid);

  const CMatrix q = g.q();
  const CMatrix half = expm(0.5 * st.step * q);
  const CMatrix one = expm(st.step * q);
  std::vector<CMatrix> steps(static_cast<std::size_t>(grid) + 1);
  steps[0] = CMatrix::Identity(g.dim, g.dim);
  for (Index k = 1; k <= grid; ++k) steps[static_cast<std::size_t>(k)] = steps[static_cast<std::size_t>(k) - 1] * one;
  auto evolve = [&](Index k) -> const CMatrix& { return steps[static_cast<std::size_t>(k)]; };

  auto record = [&](const CMatrix& product, const std::vector<Index>& species, const std::vector<Index>& sites) {
    const double weight = std::pow(st.step, 0.5 * static_cast<double>(sites.size()));
    for (Index i = 0; i < g.ancilla_dim; ++i) {
      const Complex amp = (g.boundary[static_cast<std::size_t>(i)] * product).trace() * weight;
      st.amplitudes.emplace(ParticleConfiguration{i, species, sites}, amp);
    }
  };

  record(evolve(grid), {}, {});
  std::vector<Index> species, sites;
  // prefix = e^{x_1 Q} R_1 ... R_n, with the last particle at site `last`.
  std::function<void(const CMatrix&, Index)> extend = [&](const CMatrix& prefix, Index last) {
    if (static_cast<Index>(sites.size()) >= max_particles) return;
    for (Index site = last + 1; site < grid; ++site) {
      const CMatrix to_site = sites.empty() ? CMatrix(evolve(site) * half) : CMatrix(prefix * evolve(site - last));
      for (Index a = 0; a < g.species(); ++a) {
        const CMatrix next = to_site * g.jumps[static_cast<std::size_t>(a)];
        species.push_back(a);
        sites.push_back(site);
        record(next * evolve(grid - site - 1) * half, species, sites);
        extend(next, site);
        species.pop_back();
        sites.pop_back();
      }
    }
  };
  extend(CMatrix::Identity(g.dim, g.dim), -1);
  return st;
}

}  // namespace contlim
