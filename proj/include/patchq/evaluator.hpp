#pragma once

#include "patchq/score.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace patchq {

/// A weakness is patchable when every signal of at least one alternative is
/// fully controllable.
struct CweRequirement {
    std::string id;
    std::vector<std::vector<std::string>> alternatives;
};

struct SignalRow {
    std::string name;
    std::uint32_t width = 1;
    Rational in_bits;
    Rational out_bits;
    Rational observed_bits; ///< PO; zero when the option observes nothing
};

struct OptionReport {
    PatchConfig config;
    std::vector<SignalRow> rows; ///< scored signals in declaration order
    Rational investment;
    Rational output_score;
    Rational normalized;
    std::vector<std::string> patchable_cwes; ///< in requirement order
};

struct ComparisonTable {
    std::vector<OptionReport> options;
    std::vector<CweRequirement> cwes;
};

/// Throws ConfigError on unknown or excluded names and empty alternatives.
void validate_cwes(const DataflowModel& model, const std::vector<CweRequirement>& cwes);

/// Sum over scored signals of out/width, divided by the signal count.
Rational normalized_score(const DataflowModel& model, const ScoreMap& out);

std::vector<std::string> patchable_cwes(const DataflowModel& model, const ScoreMap& out,
                                        const std::vector<CweRequirement>& cwes);

OptionReport evaluate_option(const DataflowModel& model, const PatchConfig& config,
                             const std::vector<CweRequirement>& cwes);

/// One report per config, in config order. Option names must be unique.
ComparisonTable compare_options(const DataflowModel& model, const std::vector<PatchConfig>& configs,
                                const std::vector<CweRequirement>& cwes);

enum class Strategy { Greedy, Exhaustive };

const char* to_string(Strategy s);

/// Exhaustive search refuses more candidates than this.
inline constexpr std::size_t kMaxExhaustiveCandidates = 20;

struct Suggestion {
    PatchConfig config;
    std::vector<std::string> patched; ///< in candidate order
    Rational investment;
    Rational output_score;
    Rational normalized;
    std::vector<std::string> patchable_cwes;
};

/// Ranked patch sets within `budget` bits, best first.
///
/// Greedy repeatedly adds the candidate with the largest normalized-score
/// gain per bit that still fits (ties go to the smaller name) and stops when
/// no candidate fits or the best gain is not positive; it returns every step
/// of that path including the empty start. Exhaustive ranks every subset that
/// fits by normalized score, then by lower investment, and keeps `top_n`.
///
/// An empty candidate list means every scored signal.
std::vector<Suggestion> suggest_options(const DataflowModel& model, std::vector<std::string> candidates,
                                        std::int64_t budget, Strategy strategy,
                                        const std::vector<CweRequirement>& cwes, std::size_t top_n = 10);

} // namespace patchq
