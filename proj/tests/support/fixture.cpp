#include "fixture.hpp"

#include "patchq/elaborator.hpp"
#include "patchq/frontend.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fx {

std::string path(const std::string& file) { return std::string(PATCHQ_FIXTURE_DIR) + "/" + file; }

std::string read(const std::string& file) {
    std::ifstream in(path(file));
    if (!in)
        throw std::runtime_error("cannot open fixture " + path(file));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const patchq::DataflowModel& model() {
    static const patchq::DataflowModel m =
        patchq::elaborate(patchq::parse_source(read("reglk_wrapper.sv"), "reglk_wrapper"));
    return m;
}

const std::vector<patchq::PatchConfig>& options() {
    static const auto o = patchq::options_from_json(read("options_table2.json"), model());
    return o;
}

const std::vector<patchq::CweRequirement>& cwes() {
    static const auto c = patchq::cwes_from_json(read("cwe_fixture.json"), model());
    return c;
}

const patchq::PatchConfig& option(const std::string& name) {
    for (const auto& o : options())
        if (o.name == name)
            return o;
    throw std::runtime_error("no option " + name);
}

patchq::DataflowModel elaborate_text(const std::string& source) {
    return patchq::elaborate(patchq::parse_source(source, ""));
}

} // namespace fx
