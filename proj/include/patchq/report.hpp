#pragma once

#include "patchq/evaluator.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace patchq {

enum class Format { Text, Csv, Json };

std::optional<Format> parse_format(std::string_view name);
std::optional<Strategy> parse_strategy(std::string_view name);

/// Text rounds to one decimal; CSV and JSON carry exact values. CSV writes
/// terminating decimals exactly and others to 15 places. JSON writes each
/// value as {"num", "den", "decimal"}.
std::string render_score(const ComparisonTable& table, Format format);
std::string render_comparison(const ComparisonTable& table, Format format);
std::string render_cwe(const ComparisonTable& table, Format format);
std::string render_suggestions(const std::vector<Suggestion>& ranked, Strategy strategy, std::int64_t budget,
                               Format format);

/// Graph dump: {"signals":[...], "drives":{name: tree}, "order":[...],
/// "feedback":{name:[...]}}. Trees are objects with a "node" key of leaf,
/// cond, case or hold; expressions are objects with an "op" key.
std::string dump_graph(const DataflowModel& model);

/// Inverse of dump_graph. Throws ConfigError on malformed input and
/// ElabError when the graph itself is invalid.
DataflowModel model_from_json(std::string_view text);

} // namespace patchq
