#pragma once

#include "patchq/evaluator.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace patchq {

/// Element names behind `name`: the signal itself, or every element when
/// `name` is a declared array. Throws ConfigError when nothing matches.
std::vector<std::string> resolve_signal(const DataflowModel& model, const std::string& name);

/// Parses `{"options":[{"name":..., "patched":[...], "observed":[...]}]}`.
/// Plain array names expand to all elements. Throws ConfigError on malformed
/// JSON, schema violations, duplicate option names and unknown signals.
std::vector<PatchConfig> options_from_json(std::string_view text, const DataflowModel& model);

/// Parses `[{"id":..., "alternatives":[[...], ...]}]`. A plain array name
/// inside an alternative expands to a joint requirement on all elements.
std::vector<CweRequirement> cwes_from_json(std::string_view text, const DataflowModel& model);

} // namespace patchq
