#pragma once

#include "patchq/ast.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace patchq {

enum class SignalKind { Input, Output, Internal };

const char* to_string(SignalKind kind);

/// One scorable signal. Array elements are separate signals named
/// `base[index]`.
struct SignalInfo {
    std::string name;
    std::string base;        ///< declared name; equals `name` for non-array signals
    std::uint32_t width = 1; ///< bits
    SignalKind kind = SignalKind::Internal;
    bool is_state = false;   ///< assigned in an edge-triggered block
    bool excluded = false;   ///< clocks and loop indices; never scored

    friend bool operator==(const SignalInfo&, const SignalInfo&) = default;
};

// ---------------------------------------------------------------------------
// Drive trees
// ---------------------------------------------------------------------------

struct DriveNode;
using DrivePtr = std::shared_ptr<const DriveNode>;

struct Leaf {
    ExprPtr value;
};

struct Cond {
    ExprPtr select;
    DrivePtr then_tree;
    DrivePtr else_tree;
};

/// k-way case over explicit branches only.
struct CaseK {
    ExprPtr select;
    std::vector<DrivePtr> branches;
};

/// Register keeps its previous value.
struct Hold {};

struct DriveNode {
    std::variant<Leaf, Cond, CaseK, Hold> node;

    template <class T>
    const T* as() const { return std::get_if<T>(&node); }
    template <class T>
    bool is() const { return std::holds_alternative<T>(node); }
};

DrivePtr make_leaf(ExprPtr value);
DrivePtr make_cond(ExprPtr select, DrivePtr then_tree, DrivePtr else_tree);
DrivePtr make_case(ExprPtr select, std::vector<DrivePtr> branches);
DrivePtr make_hold();

bool equal(const DriveNode& a, const DriveNode& b);
bool equal(const DrivePtr& a, const DrivePtr& b);

/// Compact one-line rendering, e.g. `cond(en, case(address[7:3], ...), 0)`.
std::string to_string(const DriveNode& tree);

/// Every signal name read by the tree (selects, guards and leaves).
void collect_refs(const DriveNode& tree, std::set<std::string>& out);
void collect_refs(const Expr& e, std::set<std::string>& out);

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

/// Immutable per-signal dataflow model: the universe of scored signals, one
/// drive tree per driven signal, and an evaluation order in which every
/// signal comes after the signals its drive tree depends on.
///
/// Reads of state signals inside sequential drive trees are not
/// dependencies (register past state scores 0). A loop that still passes
/// through a register (e.g. `state <= next; next = f(state)`) is cut at the
/// register: its reads of the loop signals are recorded as feedback reads and
/// evaluate to 0. Loops of purely combinational edges are errors.
class DataflowModel {
public:
    DataflowModel() = default;

    const std::vector<SignalInfo>& signals() const { return signals_; }
    /// Non-excluded signals in declaration order (inputs, internals, outputs).
    const std::vector<std::size_t>& scored() const { return scored_; }
    /// Indices of scored signals in evaluation order.
    const std::vector<std::size_t>& order() const { return order_; }

    std::optional<std::size_t> find(std::string_view name) const;
    const SignalInfo& info(std::size_t index) const { return signals_[index]; }
    const SignalInfo* info(std::string_view name) const;

    /// Null for inputs and excluded signals.
    DrivePtr drive(std::size_t index) const { return drives_[index]; }
    DrivePtr drive(std::string_view name) const;

    /// Signals whose reads inside `index`'s drive tree evaluate to 0.
    const std::set<std::string>& feedback_reads(std::size_t index) const { return feedback_[index]; }

    /// Names of all scored elements of a declared array (or the signal itself).
    std::vector<std::string> expand(std::string_view name) const;

    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

    std::size_t scored_count() const { return scored_.size(); }

    friend DataflowModel build_model(std::vector<SignalInfo> signals, std::map<std::string, DrivePtr> drives,
                                     std::vector<Diagnostic> diagnostics);

private:
    std::vector<SignalInfo> signals_;
    std::vector<DrivePtr> drives_;
    std::vector<std::set<std::string>> feedback_;
    std::vector<std::size_t> scored_;
    std::vector<std::size_t> order_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<Diagnostic> diagnostics_;
};

/// Validates signals and drives and computes the evaluation order.
/// Signals must be listed in the order reports should use. Throws ElabError
/// on duplicate names, missing or extra drives, Hold outside a state
/// signal, references to unknown or excluded signals, and combinational
/// cycles.
DataflowModel build_model(std::vector<SignalInfo> signals, std::map<std::string, DrivePtr> drives,
                          std::vector<Diagnostic> diagnostics = {});

/// Structural equality of signal tables and drive trees.
bool equal(const DataflowModel& a, const DataflowModel& b);

/// Width of an elaborated expression; signal references must already be
/// element names. Throws EvalError on an unknown signal.
std::uint32_t expr_width(const Expr& e, const DataflowModel& model);

} // namespace patchq
