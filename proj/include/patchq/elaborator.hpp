#pragma once

#include "patchq/ast.hpp"
#include "patchq/dataflow.hpp"

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace patchq {

/// Loops with more iterations than this are rejected.
inline constexpr std::uint64_t kMaxLoopIterations = 4096;

/// Replaces every `for` loop by copies of its body with the loop variable
/// substituted as a constant. Throws ElabError on non-constant bounds, a
/// zero step, or more than kMaxLoopIterations iterations.
AlwaysBlock unroll_loops(const AlwaysBlock& block);

/// Loop variables of every `for` in the block (before unrolling).
std::set<std::string> loop_variables(const AlwaysBlock& block);

/// Signals assigned in an unrolled block, using element names (`mem[3]`)
/// for array targets, in first-assignment order.
std::vector<std::string> assigned_targets(const AlwaysBlock& block);

/// Drive tree of `target` in an unrolled edge-triggered block.
///
/// - if/else-if chains nest as Cond(condition, branch, rest-of-chain);
/// - a case that assigns the target in only some of its labels becomes a
///   Cond chain guarded by `select == label`. When that case is the whole
///   body of an if-arm, the arm condition is folded into each guard as
///   `cond && (select == label)` and the arm's else-part becomes the
///   fallthrough;
/// - a case assigning the target in every label becomes CaseK;
/// - paths that leave the target unassigned end in Hold.
DrivePtr rewrite_sequential(const AlwaysBlock& block, std::string_view target);

/// Same rules for a combinational block, with last-assignment-wins and the
/// value assigned so far as the fallthrough. Throws ElabError when some path
/// leaves the target unassigned (latch).
DrivePtr rewrite_combinational(const AlwaysBlock& block, std::string_view target);

/// Lowers a parsed module into a DataflowModel: arrays expand to element
/// signals, continuous assigns become leaves, always blocks are rewritten
/// per target, and clocks and loop indices are excluded from scoring.
DataflowModel elaborate(const SourceModule& module);

} // namespace patchq
