#pragma once

#include <vector>

namespace rl {

struct LpEntry {
  int row;
  int col;
  double value;
};

// min cost·x subject to A x = rhs, x ≥ 0. Duplicate entries are summed.
struct LinearProgram {
  int rows = 0;
  int cols = 0;
  std::vector<LpEntry> entries;
  std::vector<double> rhs;
  std::vector<double> cost;

  int add_col(double c) {
    cost.push_back(c);
    return cols++;
  }
  int add_row(double b) {
    rhs.push_back(b);
    return rows++;
  }
  void set(int row, int col, double value) { entries.push_back({row, col, value}); }
};

struct LpSolution {
  bool converged = false;
  std::vector<double> x;
  double objective = 0.0;
  double primal_residual = 0.0;  // relative, infinity norm
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

struct LpOptions {
  double tolerance = 1e-10;
  int max_iterations = 200;
  // Equal primal and dual step lengths; slower, but steadier on degenerate
  // programs whose complementarity would otherwise collapse first.
  bool common_step = false;
};

// Mehrotra predictor-corrector interior point method on the normal
// equations, factored with a sparse LDLT.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace rl
