#pragma once
/// Tridiagonal solvers: Thomas, batched line solves over a field, and a
/// partitioned (Schur complement) solve with segments coupled through
/// single interface unknowns.

#include <array>
#include <vector>

#include "yinyang/geometry.hpp"

namespace yy {

class WorkerPool;

inline constexpr double kPivotTolerance = 1e-14;

struct TridiagonalSystem {
  std::vector<double> lower;  // lower[0] unused
  std::vector<double> diag;
  std::vector<double> upper;  // upper[n-1] unused
  std::vector<double> rhs;
  int size() const { return static_cast<int>(diag.size()); }
  void validate() const;
};

std::vector<double> thomas_solve(const TridiagonalSystem& sys, long line_id = -1);

/// All interior lines of one direction of a node array. The matrix of a line
/// is beta*I + alpha*(lower, diag, upper), coefficients read at the line's
/// nodes; unknowns are the interior nodes (boundary values taken as zero).
struct LineBatch {
  Dir dir = Dir::R;
  std::array<int, 3> dims{};
  const double* lower = nullptr;
  const double* diag = nullptr;
  const double* upper = nullptr;
  double alpha = 1.0;
  double beta = 0.0;
  double* rhs = nullptr;  // solved in place
  int line_count() const;
};

/// Vectorised batch solve (lines of the r and theta directions are processed
/// together along the contiguous phi index). Same arithmetic per line as
/// thomas_solve, hence bitwise-identical results for any worker count.
void batch_solve(const LineBatch& batch, WorkerPool* pool = nullptr);
/// One line at a time through thomas_solve; reference for tests.
void batch_solve_lines(const LineBatch& batch);

struct PartitionPlan {
  int n = 0;
  int segments = 0;
  std::vector<int> interfaces;                 // positions, strictly increasing
  std::vector<std::array<int, 2>> ranges;      // [first, last+1) per segment
  std::vector<std::vector<double>> g, h;       // responses to left / right interface
  std::vector<double> lower, diag, upper;      // copied coefficients
  // factorised Schur (interface) matrix
  std::vector<double> s_lower, s_cprime, s_inv_pivot;
};

PartitionPlan make_partition_plan(const TridiagonalSystem& sys, int segments);
std::vector<double> partitioned_solve(const TridiagonalSystem& sys, const PartitionPlan& plan);

}  // namespace yy
