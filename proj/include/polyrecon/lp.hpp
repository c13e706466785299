#pragma once

#include "polyrecon/types.hpp"

namespace polyrecon {

enum class LPStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LPStatus status);

/// min <c, x>  s.t.  B x >= b,  E x = f,  lower <= x <= upper.
///
/// Empty `b`/`f` mean zero right-hand sides; empty `lower`/`upper` mean the
/// variable is free on that side. Entries of `lower`/`upper` may be +-infinity.
struct LinearProgram {
  Vec c;
  Mat B;
  Vec b;
  Mat E;
  Vec f;
  Vec lower;
  Vec upper;
};

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  double objective = 0.0;
  Vec x;
  int pivots = 0;
};

struct LPOptions {
  double pivot_tol = 1e-9;
  double feasibility_tol = 1e-9;
  int max_pivots = 200000;
};

/// Dense two-phase tableau simplex with Bland's smallest-index rule.
LPSolution solve_lp(const LinearProgram& lp, const LPOptions& opts = {});

/// Convenience: box [-bound, bound]^n as lower/upper vectors.
void set_box(LinearProgram& lp, double bound);

}  // namespace polyrecon
