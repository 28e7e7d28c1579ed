#pragma once

// The shipped case-study fixture, loaded once per test binary.

#include "patchq/config_io.hpp"
#include "patchq/dataflow.hpp"

#include <string>
#include <vector>

namespace fx {

std::string path(const std::string& file);
std::string read(const std::string& file);

const patchq::DataflowModel& model();
const std::vector<patchq::PatchConfig>& options();
const std::vector<patchq::CweRequirement>& cwes();
const patchq::PatchConfig& option(const std::string& name);

/// Elaborates SystemVerilog text (single module).
patchq::DataflowModel elaborate_text(const std::string& source);

} // namespace fx
