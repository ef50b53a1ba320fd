#pragma once

#include "bioinv/lp/model.hpp"
#include "bioinv/lp/solver.hpp"

namespace bioinv::lp {

/// Best-bound branch-and-bound over the binary variables of `model`.
///
/// Nodes keep a shared snapshot of their parent's optimal tableau and are
/// re-optimised with the dual simplex after the branching bound change.  Ties in
/// the node queue go to the older node; branching picks the most fractional
/// binary, lowest index first.  Pure LPs are solved at the root and returned.
Solution branch_and_bound(const LinearModel& model, const SolveOptions& options);

}  // namespace bioinv::lp
