#include "contlim/structured.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace contlim {

const char* to_string(StructuredCase c) {
  switch (c) {
    case StructuredCase::a:
      return "a";
    case StructuredCase::b:
      return "b";
    case StructuredCase::c:
      return "c";
    case StructuredCase::none:
      return "none";
  }
  return "none";
}

void StructuredSpec::validate() const {
  if (n < 1 || d1 < 1 || m1 < 1) throw ShapeError("StructuredSpec: sizes must be positive");
  auto shape = [](const CMatrix& m, Index k, const char* what) {
    if (m.rows() != k || m.cols() != k) throw ShapeError(std::string("StructuredSpec: ") + what + " has the wrong shape");
  };
  shape(s, n, "S");
  shape(t, d1, "T");
  shape(v, m1, "V");
  shape(a, n, "A");
  shape(b, d1, "B");
  shape(c, m1, "C");
  for (const auto* h : {&a, &b, &c})
    if (!is_hermitian(*h, 1e-10)) throw PreconditionError("StructuredSpec: Hamiltonian factors must be Hermitian");
  if (static_cast<Index>(sigmas.size()) != n) throw ShapeError("StructuredSpec: one sigma per block required");
  if (s.norm() == 0.0 || t.norm() == 0.0 || v.norm() == 0.0) throw PreconditionError("StructuredSpec: R must be nonzero");
}

ProjectorCanonicalForm StructuredSpec::canonical_form() const {
  ProjectorCanonicalForm cf;
  cf.dim = dim();
  cf.basis_change = CMatrix::Identity(dim(), dim());
  cf.d0 = 0;
  for (const auto& sigma : sigmas) cf.blocks.push_back({d1, m1, sigma});
  return cf;
}

Lindblad StructuredSpec::lindblad() const {
  return {dim(), kron(kron(a, b), c), {kron(kron(s, t), v)}};
}

namespace {

double off_diagonal_norm(const CMatrix& m) {
  CMatrix off = m;
  off.diagonal().setZero();
  return off.norm();
}

double identity_deviation(const CMatrix& m) {
  const Index k = m.rows();
  const Complex c = m.trace() / static_cast<double>(k);
  return (m - c * CMatrix::Identity(k, k)).norm() / std::max(1.0, m.norm());
}

}  // namespace

ClassificationReport classify(const StructuredSpec& spec, double tol) {
  spec.validate();
  ClassificationReport rep;
  auto add = [&](const std::string& name, double violation, double bound) {
    rep.details.push_back({name, violation <= bound, violation});
    return violation <= bound;
  };

  // (i): H = 0 is representable with A = 0 and therefore always admissible.
  const double h_norm = spec.a.norm() * spec.b.norm() * spec.c.norm();
  const bool h_zero = add("H = 0", h_norm, tol);
  const bool a_diag = add("A diagonal", off_diagonal_norm(spec.a) / std::max(1.0, spec.a.norm()), tol);
  const bool b_id = add("B prop. I", identity_deviation(spec.b), tol);
  const bool c_id = add("C prop. I", identity_deviation(spec.c), tol);
  rep.hamiltonian_ok = h_zero || (a_diag && (b_id || c_id));

  const CMatrix& s = spec.s;
  const Index n = spec.n;
  const double s_scale = tol * std::max(1.0, s.norm() * s.norm());
  double p1 = 0.0, p2 = 0.0;
  for (Index k = 0; k < n; ++k)
    for (Index l = 0; l < n; ++l)
      for (Index m = 0; m < n; ++m)
        if (k != l && l != m && k != m) p1 = std::max(p1, std::abs(s(k, l) * std::conj(s(k, m))));
  for (Index k = 0; k < n; ++k)
    for (Index l = 0; l < n; ++l)
      if (k != l) p2 = std::max(p2, std::abs(s(k, k) * std::conj(s(k, l)) - s(l, k) * std::conj(s(l, l))));
  const bool pinch1 = add("S_kl conj(S_km) = 0", p1, s_scale);
  const bool pinch2 = add("S_kk conj(S_kl) = S_lk conj(S_ll)", p2, s_scale);

  const double entry_cut = std::sqrt(s_scale);
  Index worst_row = 0;
  for (Index k = 0; k < n; ++k) {
    Index count = 0;
    for (Index j = 0; j < n; ++j)
      if (std::abs(s(k, j)) > entry_cut) ++count;
    worst_row = std::max(worst_row, count);
  }
  const bool one_per_row = add("one nonzero per row of S", static_cast<double>(std::max<Index>(worst_row - 1, 0)), 0.0);
  const bool s_diag = add("S diagonal", off_diagonal_norm(s) / std::max(1.0, s.norm()), tol);
  const bool t_id = add("T prop. I", identity_deviation(spec.t), tol);
  const bool v_unitary = add("V prop. unitary", identity_deviation(spec.v.adjoint() * spec.v), tol);

  if (pinch1 && pinch2 && t_id && v_unitary) rep.admissible.push_back(StructuredCase::a);
  if (one_per_row && !t_id && v_unitary) rep.admissible.push_back(StructuredCase::b);
  if (s_diag && t_id && !v_unitary) rep.admissible.push_back(StructuredCase::c);
  if (rep.hamiltonian_ok && !rep.admissible.empty()) rep.matched = rep.admissible.front();
  return rep;
}

bool verify_numeric(const StructuredSpec& spec, double tol) {
  spec.validate();
  const SuperOp p = build_projector(spec.canonical_form());
  return check_plp(p, liouvillian_matrix(spec.lindblad()), tol);
}

StructuredSpec sample_structured_spec(Rng& rng, const FuzzOptions& options) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto size = [&](Index fixed, Index max) {
    if (fixed > 0) return fixed;
    return static_cast<Index>(std::uniform_int_distribution<Index>(1, max)(rng));
  };

  StructuredSpec spec;
  spec.n = size(options.fixed_n, options.max_n);
  spec.d1 = size(options.fixed_d1, options.max_d1);
  spec.m1 = size(options.fixed_m1, options.max_m1);
  const Index n = spec.n;

  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: {
      spec.s = CMatrix::Zero(n, n);
      for (Index k = 0; k < n; ++k) spec.s(k, k) = Complex(normal(rng), normal(rng));
      break;
    }
    case 1: {
      std::vector<Index> perm(static_cast<std::size_t>(n));
      for (Index k = 0; k < n; ++k) perm[static_cast<std::size_t>(k)] = k;
      std::shuffle(perm.begin(), perm.end(), rng);
      spec.s = CMatrix::Zero(n, n);
      for (Index k = 0; k < n; ++k) spec.s(k, perm[static_cast<std::size_t>(k)]) = normal(rng);
      break;
    }
    case 2: {
      spec.s = CMatrix::Zero(n, n);
      const Index col = std::uniform_int_distribution<Index>(0, n - 1)(rng);
      for (Index k = 0; k < n; ++k) spec.s(k, col) = normal(rng);
      break;
    }
    default:
      spec.s = random_ginibre(rng, n, n);
  }
  spec.t = uniform(rng) < 0.5 ? CMatrix(normal(rng) * CMatrix::Identity(spec.d1, spec.d1)) : random_ginibre(rng, spec.d1, spec.d1);
  spec.v = uniform(rng) < 0.5 ? CMatrix(normal(rng) * random_unitary(rng, spec.m1)) : random_ginibre(rng, spec.m1, spec.m1);
  if (uniform(rng) < 0.6) {
    spec.a = CMatrix::Zero(n, n);
    for (Index k = 0; k < n; ++k) spec.a(k, k) = normal(rng);
  } else {
    spec.a = random_hermitian(rng, n);
  }
  if (uniform(rng) < 0.2) spec.a.setZero();
  spec.b = uniform(rng) < 0.5 ? CMatrix(normal(rng) * CMatrix::Identity(spec.d1, spec.d1)) : random_hermitian(rng, spec.d1);
  spec.c = uniform(rng) < 0.5 ? CMatrix(normal(rng) * CMatrix::Identity(spec.m1, spec.m1)) : random_hermitian(rng, spec.m1);
  for (Index k = 0; k < n; ++k) {
    if (options.maximally_mixed_sigma || uniform(rng) < 0.5)
      spec.sigmas.push_back(CMatrix::Identity(spec.m1, spec.m1) / static_cast<double>(spec.m1));
    else
      spec.sigmas.push_back(random_density(rng, spec.m1));
  }
  return spec;
}

FuzzSummary fuzz_agreement(std::uint64_t seed, int trials, double tol, const FuzzOptions& options) {
  if (trials < 1) throw PreconditionError("fuzz_agreement: trials must be positive");
  FuzzSummary summary;
  Rng rng(seed);
  for (int trial = 0; trial < trials; ++trial) {
    StructuredSpec spec = sample_structured_spec(rng, options);
    if (spec.s.norm() < 1e-12) continue;
    ++summary.trials;
    if (!verify_numeric(spec, tol)) continue;
    ++summary.true_instances;
    const ClassificationReport rep = classify(spec, tol);
    summary.admissible_on_true.push_back(rep.admissible);
    if (!rep.hamiltonian_ok || rep.matched == StructuredCase::none) {
      std::ostringstream os;
      os << "n=" << spec.n << " D1=" << spec.d1 << " m1=" << spec.m1 << ": PL = PLP holds but";
      if (!rep.hamiltonian_ok) os << " the Hamiltonian condition fails";
      if (rep.matched == StructuredCase::none) os << " no case (a)/(b)/(c) matches";
      summary.disagreements.push_back({trial, os.str()});
    }
  }
  return summary;
}

}  // namespace contlim
