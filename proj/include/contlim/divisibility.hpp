#pragma once

#include <optional>
#include <string>
#include <vector>

#include "contlim/lindblad.hpp"

namespace contlim {

enum class DivisibilityStatus { divisible, markovian, not_divisible, inconclusive };

const char* to_string(DivisibilityStatus s);

struct CoarseResult {
  int power = 0;
  LiouvillianMatrix generator;  // E^power = e^{generator}
};

struct DivisibilityVerdict {
  DivisibilityStatus status = DivisibilityStatus::inconclusive;
  double spacing = 1.0;
  std::optional<SuperOp> projector;
  std::optional<LiouvillianMatrix> generator;  // E = P e^{spacing * L}
  std::optional<CoarseResult> coarse;          // only filled by analyze()
  std::vector<std::string> diagnostics;
  bool completed_by_search = false;
};

SuperOp extract_projector(const SuperOp& e, double tol = kDefaultTol);

enum class GeneratorStatus { found, inconclusive, not_divisible };

struct GeneratorResult {
  GeneratorStatus status = GeneratorStatus::inconclusive;
  std::optional<LiouvillianMatrix> generator;
  std::vector<std::string> diagnostics;
  bool completed_by_search = false;
};

GeneratorResult extract_generator(const SuperOp& e, const SuperOp& p, double a, double tol = kDefaultTol);

bool check_plp(const SuperOp& p, const LiouvillianMatrix& l, double tol = kDefaultTol);

std::optional<CoarseResult> coarse_divisibility(const SuperOp& e, int p_max, double tol = kDefaultTol);

DivisibilityVerdict is_infinitely_divisible(const SuperOp& e, double a, double tol = kDefaultTol);

// is_infinitely_divisible followed, on a negative or inconclusive verdict, by the coarse search.
DivisibilityVerdict analyze(const SuperOp& e, double a, double tol = kDefaultTol, int p_max = 4);

struct CompletionOptions {
  int max_iterations = 5000;
  int max_reductions = 64;
  Index max_dim = 6;
};

struct CompletionResult {
  std::optional<LiouvillianMatrix> generator;
  std::string diagnostic;
  int iterations = 0;
  int reductions = 0;
};

// Searches for a generator L with P L = drift among all completions on ker P: L-BFGS on the
// squared negative part of the projected Choi matrix over the affine constraint set, followed by
// a face reduction that lowers the rank of the dissipator.
CompletionResult complete_generator(const SuperOp& p, const CMatrix& drift, double tol = kDefaultTol,
                                    const CompletionOptions& options = {});

}  // namespace contlim
