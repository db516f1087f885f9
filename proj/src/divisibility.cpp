#include "contlim/divisibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace contlim {

const char* to_string(DivisibilityStatus s) {
  switch (s) {
    case DivisibilityStatus::divisible:
      return "divisible";
    case DivisibilityStatus::markovian:
      return "markovian";
    case DivisibilityStatus::not_divisible:
      return "not_divisible";
    case DivisibilityStatus::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

SuperOp extract_projector(const SuperOp& e, double tol) {
  e.validate();
  const SubspaceBasis range = range_space(e.matrix, tol);
  const SubspaceBasis kernel = null_space(e.matrix, tol);
  return {e.dim, oblique_projector(range, kernel)};
}

bool check_plp(const SuperOp& p, const LiouvillianMatrix& l, double tol) {
  if (p.matrix.rows() != l.matrix.rows() || p.matrix.cols() != l.matrix.cols())
    throw ShapeError("check_plp: shape mismatch");
  const CMatrix pl = p.matrix * l.matrix;
  return (pl - pl * p.matrix).norm() <= tol * std::max(1.0, pl.norm());
}

GeneratorResult extract_generator(const SuperOp& e, const SuperOp& p, double a, double tol) {
  if (!(a > 0.0)) throw PreconditionError("extract_generator: spacing must be positive");
  if (e.dim != p.dim) throw ShapeError("extract_generator: dimension mismatch");
  GeneratorResult out;
  const Index n = e.matrix.rows();
  const double escale = std::max(1.0, e.matrix.norm());

  const double left = (p.matrix * e.matrix - e.matrix).norm();
  const double right = (e.matrix * p.matrix - e.matrix).norm();
  if (left > tol * escale || right > tol * escale) {
    std::ostringstream os;
    os << "structural failure: ||PE - E|| = " << left << ", ||EP - E|| = " << right;
    out.status = GeneratorStatus::not_divisible;
    out.diagnostics.push_back(os.str());
    return out;
  }

  const CMatrix g = e.matrix + CMatrix::Identity(n, n) - p.matrix;
  const BranchCutScan scan = scan_branch_cut(sorted_eigenvalues(g));
  if (scan.odd_negative) {
    std::ostringstream os;
    os << "E + I - P has the negative eigenvalue " << scan.odd_negative->real() << " with odd multiplicity "
       << scan.multiplicity << "; it is not the exponential of a Hermiticity-preserving map";
    out.status = GeneratorStatus::not_divisible;
    out.diagnostics.push_back(os.str());
    return out;
  }
  if (scan.touches_cut) {
    out.diagnostics.push_back("E + I - P has a negative eigenvalue of even multiplicity; the principal branch is unavailable");
    return out;
  }

  CMatrix drift;
  try {
    drift = logm_principal(g) / a;
  } catch (const SingularMatrixError& err) {
    out.status = GeneratorStatus::not_divisible;
    out.diagnostics.push_back(std::string("E + I - P is singular: ") + err.what());
    return out;
  } catch (const NumericalError& err) {
    out.diagnostics.push_back(err.what());
    return out;
  }

  LiouvillianMatrix naive{e.dim, drift};
  const GeneratorReport report = is_generator(naive, tol);
  if (report.ok() && check_plp(p, naive, tol)) {
    out.status = GeneratorStatus::found;
    out.generator = naive;
    return out;
  }
  {
    std::ostringstream os;
    os << "log(E + I - P)/a is not a generator (min projected Choi eigenvalue " << report.min_projected_eigenvalue
       << ")";
    out.diagnostics.push_back(os.str());
  }

  const CompletionResult completion = complete_generator(p, drift, tol);
  if (!completion.generator) {
    out.diagnostics.push_back(completion.diagnostic);
    out.diagnostics.push_back("other logarithm branches were not searched");
    return out;
  }
  const LiouvillianMatrix& l = *completion.generator;
  double rec = 0.0;
  try {
    rec = (p.matrix * expm(a * l.matrix) - e.matrix).norm();
  } catch (const Error& err) {
    out.diagnostics.push_back(std::string("completed generator could not be exponentiated: ") + err.what());
    return out;
  }
  if (!check_plp(p, l, tol) || rec > tol * escale) {
    std::ostringstream os;
    os << "completed generator failed re-verification (reconstruction error " << rec << ")";
    out.diagnostics.push_back(os.str());
    return out;
  }
  out.status = GeneratorStatus::found;
  out.generator = l;
  out.completed_by_search = true;
  return out;
}

std::optional<CoarseResult> coarse_divisibility(const SuperOp& e, int p_max, double tol) {
  if (p_max < 2) throw PreconditionError("coarse_divisibility: p_max must be at least 2");
  SuperOp ep = e;
  for (int p = 2; p <= p_max; ++p) {
    ep = compose(ep, e);
    const MarkovianResult m = markovian_test(ep, tol);
    if (m.status == MarkovianStatus::yes) return CoarseResult{p, *m.generator};
  }
  return std::nullopt;
}

DivisibilityVerdict is_infinitely_divisible(const SuperOp& e, double a, double tol) {
  if (!(a > 0.0)) throw PreconditionError("is_infinitely_divisible: spacing must be positive");
  const CptpReport cptp = is_cptp(e, tol);
  if (!cptp.ok()) {
    std::ostringstream os;
    os << "is_infinitely_divisible: input is not CPTP (min Choi eigenvalue " << cptp.min_choi_eigenvalue
       << ", trace violation " << cptp.tp_violation << ")";
    throw PreconditionError(os.str());
  }

  DivisibilityVerdict v;
  v.spacing = a;
  const Index n = e.matrix.rows();

  SuperOp p;
  try {
    p = extract_projector(e, tol);
  } catch (const DefectiveError& err) {
    v.status = DivisibilityStatus::not_divisible;
    v.diagnostics.push_back(std::string("range and kernel of E are not complementary: ") + err.what());
    return v;
  }

  if ((p.matrix - CMatrix::Identity(n, n)).norm() <= tol) {
    v.projector = SuperOp::identity(e.dim);
    const MarkovianResult m = markovian_test(e, tol);
    switch (m.status) {
      case MarkovianStatus::yes:
        v.status = DivisibilityStatus::markovian;
        v.generator = LiouvillianMatrix{e.dim, m.generator->matrix / a};
        break;
      case MarkovianStatus::no:
        v.status = DivisibilityStatus::not_divisible;
        v.diagnostics.push_back(m.diagnostic);
        break;
      case MarkovianStatus::inconclusive:
        v.status = DivisibilityStatus::inconclusive;
        v.diagnostics.push_back(m.diagnostic);
        break;
    }
    return v;
  }

  if (!is_projector_channel(p, std::max(tol, 1e-8))) {
    v.status = DivisibilityStatus::not_divisible;
    v.diagnostics.push_back("the projector onto ran E along ker E is not a projector quantum channel");
    return v;
  }
  v.projector = p;

  const GeneratorResult g = extract_generator(e, p, a, tol);
  v.diagnostics.insert(v.diagnostics.end(), g.diagnostics.begin(), g.diagnostics.end());
  switch (g.status) {
    case GeneratorStatus::found:
      v.status = DivisibilityStatus::divisible;
      v.generator = g.generator;
      v.completed_by_search = g.completed_by_search;
      break;
    case GeneratorStatus::not_divisible:
      v.status = DivisibilityStatus::not_divisible;
      break;
    case GeneratorStatus::inconclusive:
      v.status = DivisibilityStatus::inconclusive;
      break;
  }
  return v;
}

DivisibilityVerdict analyze(const SuperOp& e, double a, double tol, int p_max) {
  DivisibilityVerdict v = is_infinitely_divisible(e, a, tol);
  if (p_max >= 2 && (v.status == DivisibilityStatus::not_divisible || v.status == DivisibilityStatus::inconclusive))
    v.coarse = coarse_divisibility(e, p_max, tol);
  return v;
}

}  // namespace contlim
