#pragma once

#include <compare>
#include <map>
#include <vector>

#include "contlim/mps.hpp"

namespace contlim {

struct GeneralizedCmps {
  Index ancilla_dim = 0;  // K
  Index dim = 0;          // bond dimension D
  std::vector<CMatrix> boundary;
  CMatrix hamiltonian;
  std::vector<CMatrix> jumps;
  std::vector<int> statistics;  // +1 bosonic, -1 fermionic

  void validate(double tol = kDefaultTol) const;
  Index species() const { return static_cast<Index>(jumps.size()); }
  CMatrix q() const;
  int eta(Index alpha, Index beta) const;
  SuperOp projector() const;
  CMatrix liouvillian() const;
  // L_alpha = Q (x) I + I (x) conj(Q) + sum_b eta(alpha, b) R_b (x) conj(R_b)
  CMatrix liouvillian_species(Index alpha) const;
  // L_{alpha,beta} with signs eta(alpha, c) eta(beta, c)
  CMatrix liouvillian_pair(Index alpha, Index beta) const;
};

struct Segment {
  double start = 0.0;
  double end = 1.0;

  double length() const { return end - start; }
};

struct ParticleConfiguration {
  Index ancilla = 0;
  std::vector<Index> species;
  std::vector<Index> sites;  // strictly increasing grid indices

  auto operator<=>(const ParticleConfiguration&) const = default;
  Index particles() const { return static_cast<Index>(sites.size()); }
};

struct TruncatedState {
  Segment segment;
  Index grid_points = 0;
  Index max_particles = 0;
  double step = 0.0;
  std::map<ParticleConfiguration, Complex> amplitudes;

  double position(Index site) const { return segment.start + (static_cast<double>(site) + 0.5) * step; }
  // Sum of squared amplitudes over all configurations with n particles.
  double sector_weight(Index n) const;
};

inline constexpr Index kMaxTruncatedParticles = 4;
inline constexpr double kMaxTruncatedConfigurations = 2e7;

GeneralizedCmps from_verdict(const DivisibilityVerdict& verdict, double tol = kDefaultTol);
GeneralizedCmps from_mps(const MpsTensor& t, double tol = kDefaultTol);

SuperOp transfer(const GeneralizedCmps& g, double length);
double norm_squared(const GeneralizedCmps& g, double length);
Complex correlation(const GeneralizedCmps& g, double length, Index alpha, Index beta, double x, double y);
double density(const GeneralizedCmps& g, double length, Index alpha, double x);
TruncatedState truncated_state(const GeneralizedCmps& g, const Segment& seg, Index grid, Index max_particles);

}  // namespace contlim
