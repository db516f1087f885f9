#pragma once

#include <string>
#include <vector>

#include "contlim/divisibility.hpp"

namespace contlim {

struct MpsTensor {
  Index d = 0;
  Index D = 0;
  std::vector<CMatrix> matrices;
  double spacing = 1.0;

  void validate() const;
};

inline constexpr Index kDenseStateLimit = 10'000'000;

SuperOp transfer_matrix(const MpsTensor& t);

// Gauge transformation A_i -> X A_i X^{-1} / sqrt(r), with X^dagger X the dominant left fixed
// point of E and r its spectral radius, making the transfer matrix trace preserving.
MpsTensor normalize_tp(const MpsTensor& t, double tol = kDefaultTol);

CVector dense_state(const MpsTensor& t, Index n_sites);

Complex discrete_two_point(const MpsTensor& t, Index n_sites, const CMatrix& op1, Index site1, const CMatrix& op2,
                           Index site2);

DivisibilityVerdict has_continuum_limit(const MpsTensor& t, double tol = kDefaultTol);

namespace presets {

MpsTensor ferromagnet(Index k = 2, double spacing = 1.0);
MpsTensor antiferromagnet(double spacing = 1.0);
MpsTensor depolarizing(double spacing = 1.0);
// Per-site rate gamma: p = (1 + e^{-2 gamma}) / 2, q = (1 - e^{-2 gamma}) / 2.
MpsTensor bracket(double gamma = 1.0, double spacing = 1.0);
MpsTensor aklt(double spacing = 1.0);
MpsTensor identity(Index D = 2, double spacing = 1.0);

// Looks up a preset by name; gamma only affects "bracket".
MpsTensor by_name(const std::string& name, double gamma, double spacing);
std::vector<std::string> names();

// Physical operator counting open brackets in the bracket preset: |2><2| + |3><3|.
CMatrix bracket_number_operator();

}  // namespace presets

}  // namespace contlim
