#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "contlim/divisibility.hpp"
#include "contlim/projectors.hpp"
#include "contlim/random.hpp"

namespace contlim {

// P with n identical blocks (D1, m1, sigma_k) in the computational basis, a single-term
// Hamiltonian H = A (x) B (x) C and a single jump R = S (x) T (x) V on C^n (x) C^D1 (x) C^m1.
struct StructuredSpec {
  Index n = 1;
  Index d1 = 1;
  Index m1 = 1;
  CMatrix s, t, v;
  CMatrix a, b, c;
  std::vector<CMatrix> sigmas;

  void validate() const;
  Index dim() const { return n * d1 * m1; }
  ProjectorCanonicalForm canonical_form() const;
  Lindblad lindblad() const;
};

enum class StructuredCase { a, b, c, none };

const char* to_string(StructuredCase c);

struct ConditionCheck {
  std::string name;
  bool passed = false;
  double violation = 0.0;
};

struct ClassificationReport {
  bool hamiltonian_ok = false;
  StructuredCase matched = StructuredCase::none;
  // Every case whose conditions hold (first entry equals `matched`).
  std::vector<StructuredCase> admissible;
  std::vector<ConditionCheck> details;
};

ClassificationReport classify(const StructuredSpec& spec, double tol = kDefaultTol);
bool verify_numeric(const StructuredSpec& spec, double tol = kDefaultTol);

struct Disagreement {
  int trial = 0;
  std::string description;
};

struct FuzzOptions {
  Index max_n = 3;
  Index max_d1 = 3;
  Index max_m1 = 3;
  bool maximally_mixed_sigma = false;
  // Fixes the sizes when positive.
  Index fixed_n = 0, fixed_d1 = 0, fixed_m1 = 0;
};

struct FuzzSummary {
  int trials = 0;
  int true_instances = 0;
  std::vector<Disagreement> disagreements;
  // Cases matched by classify on instances with PL = PLP.
  std::vector<std::vector<StructuredCase>> admissible_on_true;
};

StructuredSpec sample_structured_spec(Rng& rng, const FuzzOptions& options);
FuzzSummary fuzz_agreement(std::uint64_t seed, int trials, double tol = kDefaultTol, const FuzzOptions& options = {});

}  // namespace contlim
