#pragma once

#include <optional>
#include <string>
#include <vector>

#include "contlim/channels.hpp"

namespace contlim {

struct Lindblad {
  Index dim = 0;
  CMatrix hamiltonian;
  std::vector<CMatrix> jumps;

  static Lindblad zero(Index dim);
  void validate() const;
  Index jump_count() const { return static_cast<Index>(jumps.size()); }
};

struct LiouvillianMatrix {
  Index dim = 0;
  CMatrix matrix;  // dim^2 x dim^2
};

// Q = -iH - 1/2 sum_a R_a^dagger R_a
CMatrix q_from(const CMatrix& h, const std::vector<CMatrix>& jumps);
LiouvillianMatrix liouvillian_matrix(const Lindblad& g);
// L = Q (x) I + I (x) conj(Q) + sum_a R_a (x) conj(R_a) for an arbitrary Q.
CMatrix liouvillian_from_q(const CMatrix& q, const std::vector<CMatrix>& jumps);

SuperOp channel_at(const LiouvillianMatrix& l, double t);
SuperOp channel_at(const Lindblad& g, double t);

struct GeneratorReport {
  bool trace_annihilating = false;
  bool hermiticity_preserving = false;
  bool conditionally_cp = false;
  double trace_violation = 0.0;
  double hermiticity_violation = 0.0;
  double min_projected_eigenvalue = 0.0;

  bool ok() const { return trace_annihilating && hermiticity_preserving && conditionally_cp; }
};

GeneratorReport is_generator(const LiouvillianMatrix& l, double tol = kDefaultTol);

enum class MarkovianStatus { yes, no, inconclusive };

struct MarkovianResult {
  MarkovianStatus status = MarkovianStatus::inconclusive;
  std::optional<LiouvillianMatrix> generator;
  std::string diagnostic;
};

struct BranchCutScan {
  bool touches_cut = false;
  // Set when a negative real eigenvalue has odd algebraic multiplicity; such a spectrum admits
  // no Hermiticity-preserving logarithm on any branch.
  std::optional<Complex> odd_negative;
  long multiplicity = 0;
};

BranchCutScan scan_branch_cut(const std::vector<Complex>& spectrum);

MarkovianResult markovian_test(const SuperOp& e, double tol = kDefaultTol);

// Splits a valid generator into Hamiltonian and jump operators. Jumps are traceless and
// orthogonal, their number equals the rank of the projected Choi block; H is traceless.
Lindblad split_generator(const LiouvillianMatrix& l, double tol = kDefaultTol);

// Projection of the Choi-layout matrix of L onto the complement of the maximally entangled vector.
CMatrix projected_choi(const CMatrix& liouvillian, Index dim);

}  // namespace contlim
