#pragma once

#include "patchq/dataflow.hpp"
#include "patchq/rational.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace patchq {

/// Signal name to controllable (or observable) bits.
using ScoreMap = std::map<std::string, Rational, std::less<>>;

struct PatchConfig {
    std::string name;
    std::set<std::string> patched;  ///< fully controllable signals
    std::set<std::string> observed; ///< fully observable taps (PO only)
};

enum class Context { Combinational, Sequential };

/// What an expression sees while being scored. In a sequential context every
/// read of a state signal scores 0; reads listed in `feedback` always do.
struct ScoreEnv {
    const DataflowModel& model;
    const ScoreMap& scores;
    Context context = Context::Combinational;
    const std::set<std::string>* feedback = nullptr;
};

struct Scored {
    Rational score;
    std::uint32_t width = 1;

    Rational sigma() const { return score / width; }
};

/// One arm of a conditional or case. `constant` arms get the distinct-constant
/// score when the select is fully controllable.
struct Branch {
    Rational score;
    std::uint32_t width = 1;
    bool constant = false;
};

Scored score_expr(const Expr& e, const ScoreEnv& env);

/// sigma * max + (1 - sigma) * mean over two arms. With sigma exactly 1 the
/// constant arms first score min(floor(log2 distinct), width).
Rational score_cond(const Rational& sigma, const Branch& then_arm, const Branch& else_arm, std::size_t distinct);

/// Same rule over k >= 1 arms.
Rational score_case(const Rational& sigma, const std::vector<Branch>& arms, std::size_t distinct);

/// Number of distinct constant values among the constant leaves of a tree.
std::size_t distinct_constants(const DriveNode& tree);

/// Number of distinct constant values among the arms of the ternary chain
/// rooted at `e` (arms that are themselves ternaries are followed).
std::size_t distinct_constants(const Expr& e);

/// Score of a drive tree assigned to a `width`-bit target; each leaf is
/// capped at the target width.
Rational score_tree(const DriveNode& tree, std::uint32_t width, const ScoreEnv& env);

/// Throws ConfigError unless every patched and observed name is a scored signal.
void validate_config(const DataflowModel& model, const PatchConfig& config);

/// Patching controllability of every scored signal.
ScoreMap compute_pc(const DataflowModel& model, const PatchConfig& config);

/// Patching observability of every scored signal.
///
/// Works per bit on the reversed graph in one reverse-topological pass; a
/// signal takes the maximum over everything it feeds:
///  - a leaf passes the target's per-bit value, scaled by min(w_t, w_e)/w_e;
///  - conditional and case arms get p*o + (1-p)*o/k with p the select's
///    controllability under `config.patched` and k the arm count; selects
///    get o/2;
///  - two-input operators and signal-signal comparisons give o/2 to each
///    side, comparisons with a constant pass o to the signal;
///  - shifts give o*(n-1)/n to the shifted operand and nothing to the amount;
///  - bit and part selects give o*m/w_base to the base;
///  - `~`, `!` and concatenation pass o through.
/// Observed signals are pinned to their full width.
ScoreMap compute_po(const DataflowModel& model, const PatchConfig& config);

} // namespace patchq
