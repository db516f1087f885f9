#pragma once

#include <variant>
#include <vector>

#include "contlim/numerics.hpp"

namespace contlim {

// Vectorization convention shared by every module: |X> = sum_ij X_ij |i>|j> (row-major), so
// that A X B^dagger maps to (A (x) conj(B)) |X>. Trace preservation reads <<I| E = <<I|.
CVector vec(const CMatrix& x);
CMatrix unvec(const CVector& v, Index dim);

struct KrausChannel {
  Index dim = 0;
  std::vector<CMatrix> kraus;

  void validate() const;
};

struct SuperOp {
  Index dim = 0;
  CMatrix matrix;  // dim^2 x dim^2

  static SuperOp identity(Index dim);
  void validate() const;
};

struct ChoiMatrix {
  Index dim = 0;
  CMatrix matrix;  // C_{(i k),(j l)} = E_{(i j),(k l)}
};

// Realigns a dim^2 x dim^2 matrix between superoperator and Choi layouts (an involution).
CMatrix reshuffle(const CMatrix& m, Index dim);

SuperOp kraus_to_superop(const KrausChannel& ch);
KrausChannel superop_to_kraus(const SuperOp& e, double tol = kDefaultTol);
ChoiMatrix choi(const SuperOp& e);
SuperOp from_choi(const ChoiMatrix& c);

struct CptpReport {
  bool completely_positive = false;
  bool trace_preserving = false;
  bool hermiticity_preserving = false;
  double min_choi_eigenvalue = 0.0;
  double tp_violation = 0.0;

  bool ok() const { return completely_positive && trace_preserving; }
};

CptpReport is_cptp(const SuperOp& e, double tol = kDefaultTol);
bool is_projector_channel(const SuperOp& e, double tol = kDefaultTol);
SuperOp compose(const SuperOp& e1, const SuperOp& e2);
SuperOp power(const SuperOp& e, int p);
CMatrix apply(const SuperOp& e, const CMatrix& rho);
// Applies the adjoint (Heisenberg picture) map: X -> sum_i A_i^dagger X A_i.
CMatrix apply_dual(const SuperOp& e, const CMatrix& x);

struct Identity {
  Index dim = 0;
};
struct Pinching {
  CMatrix basis;  // columns form an orthonormal basis
};
struct Depolarize {
  CMatrix sigma;
};
using BuiltinKind = std::variant<Identity, Pinching, Depolarize>;

KrausChannel builtin(const BuiltinKind& kind);
KrausChannel identity_channel(Index dim);
KrausChannel pinching_channel(const CMatrix& basis);
KrausChannel depolarizing_channel(const CMatrix& sigma);

// Qubit superoperator expressed in the normalized Pauli basis {I, X, Y, Z}/sqrt(2).
CMatrix to_pauli_basis(const SuperOp& e);

}  // namespace contlim
