#include "patchq/config_io.hpp"

#include "json.hpp"

#include <set>

namespace patchq {

using nlohmann::json;

namespace {

json parse(std::string_view text, const char* what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(what) + ": invalid JSON: " + e.what());
    }
}

std::vector<std::string> names(const json& j, const std::string& where) {
    if (!j.is_array())
        throw ConfigError(where + " must be an array of signal names");
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string())
            throw ConfigError(where + " must contain only strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::set<std::string> resolve_all(const DataflowModel& model, const std::vector<std::string>& in,
                                  const std::string& where) {
    std::set<std::string> out;
    for (const auto& n : in) {
        try {
            for (auto& e : resolve_signal(model, n))
                out.insert(std::move(e));
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.detail());
        }
    }
    return out;
}

} // namespace

std::vector<std::string> resolve_signal(const DataflowModel& model, const std::string& name) {
    if (const SignalInfo* info = model.info(name); info && info->excluded)
        throw ConfigError("signal '" + name + "' is excluded from scoring");
    auto out = model.expand(name);
    if (out.empty())
        throw ConfigError("unknown signal '" + name + "'");
    return out;
}

std::vector<PatchConfig> options_from_json(std::string_view text, const DataflowModel& model) {
    const json doc = parse(text, "options");
    if (!doc.is_object() || !doc.contains("options") || !doc["options"].is_array())
        throw ConfigError("options: expected an object with an \"options\" array");
    std::vector<PatchConfig> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < doc["options"].size(); ++i) {
        const json& o = doc["options"][i];
        const std::string where = "options[" + std::to_string(i) + "]";
        if (!o.is_object())
            throw ConfigError(where + " must be an object");
        for (const auto& [key, _] : o.items())
            if (key != "name" && key != "patched" && key != "observed")
                throw ConfigError(where + ": unknown key \"" + key + "\"");
        if (!o.contains("name") || !o["name"].is_string())
            throw ConfigError(where + ": missing string \"name\"");
        PatchConfig c;
        c.name = o["name"].get<std::string>();
        if (!seen.insert(c.name).second)
            throw ConfigError("duplicate option name '" + c.name + "'");
        const std::string label = "option '" + c.name + "'";
        if (o.contains("patched"))
            c.patched = resolve_all(model, names(o["patched"], label + " \"patched\""), label);
        if (o.contains("observed"))
            c.observed = resolve_all(model, names(o["observed"], label + " \"observed\""), label);
        out.push_back(std::move(c));
    }
    if (out.empty())
        throw ConfigError("options: the \"options\" array is empty");
    return out;
}

std::vector<CweRequirement> cwes_from_json(std::string_view text, const DataflowModel& model) {
    const json doc = parse(text, "weaknesses");
    if (!doc.is_array())
        throw ConfigError("weaknesses: expected an array of {\"id\", \"alternatives\"} objects");
    std::vector<CweRequirement> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const json& o = doc[i];
        const std::string where = "weaknesses[" + std::to_string(i) + "]";
        if (!o.is_object() || !o.contains("id") || !o["id"].is_string())
            throw ConfigError(where + ": missing string \"id\"");
        CweRequirement r;
        r.id = o["id"].get<std::string>();
        if (!o.contains("alternatives") || !o["alternatives"].is_array())
            throw ConfigError(where + " (" + r.id + "): missing \"alternatives\" array");
        for (const auto& alt : o["alternatives"]) {
            const std::string label = r.id;
            const auto set = resolve_all(model, names(alt, label + " alternative"), label);
            // Keep declaration order so reports are stable.
            std::vector<std::string> ordered;
            for (std::size_t k : model.scored())
                if (set.count(model.info(k).name))
                    ordered.push_back(model.info(k).name);
            r.alternatives.push_back(std::move(ordered));
        }
        out.push_back(std::move(r));
    }
    validate_cwes(model, out);
    return out;
}

} // namespace patchq
