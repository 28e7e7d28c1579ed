#include "patchq/patchq.h"

#include "patchq/config_io.hpp"
#include "patchq/elaborator.hpp"
#include "patchq/frontend.hpp"
#include "patchq/report.hpp"

#include <cstdlib>
#include <cstring>

struct patchq_design {
    patchq::DataflowModel model;
    std::string label;
};

struct patchq_options {
    std::vector<patchq::PatchConfig> configs;
};

struct patchq_cwes {
    std::vector<patchq::CweRequirement> items;
};

namespace {

thread_local std::string last_error;

patchq_status status_of(patchq::ErrorKind kind) {
    switch (kind) {
    case patchq::ErrorKind::Lex: return PATCHQ_ERR_LEX;
    case patchq::ErrorKind::Parse: return PATCHQ_ERR_PARSE;
    case patchq::ErrorKind::Unsupported: return PATCHQ_ERR_UNSUPPORTED;
    case patchq::ErrorKind::Elab: return PATCHQ_ERR_ELAB;
    case patchq::ErrorKind::Eval: return PATCHQ_ERR_EVAL;
    case patchq::ErrorKind::Config: return PATCHQ_ERR_CONFIG;
    case patchq::ErrorKind::Limit: return PATCHQ_ERR_LIMIT;
    }
    return PATCHQ_ERR_INTERNAL;
}

std::string located(const std::string& label, const patchq::Error& e) {
    std::string prefix = label.empty() ? "" : label + ":";
    if (e.pos().valid())
        prefix += std::to_string(e.pos().line) + ":" + std::to_string(e.pos().column) + ":";
    return (prefix.empty() ? "" : prefix + " ") + "error: " + e.detail();
}

// Runs fn, translating exceptions into a status and the thread's error text.
template <class Fn>
patchq_status guarded(const std::string& label, Fn fn) {
    try {
        fn();
        last_error.clear();
        return PATCHQ_OK;
    } catch (const patchq::Error& e) {
        last_error = located(label, e);
        return status_of(e.kind());
    } catch (const std::bad_alloc&) {
        last_error = "error: out of memory";
    } catch (const std::exception& e) {
        last_error = std::string("error: ") + e.what();
    }
    return PATCHQ_ERR_INTERNAL;
}

patchq_status bad_argument(const char* what) {
    last_error = std::string("error: ") + what;
    return PATCHQ_ERR_ARGUMENT;
}

char* copy_out(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, s.data(), s.size() + 1);
    return p;
}

bool format_of(patchq_format f, patchq::Format& out) {
    switch (f) {
    case PATCHQ_FORMAT_TEXT: out = patchq::Format::Text; return true;
    case PATCHQ_FORMAT_CSV: out = patchq::Format::Csv; return true;
    case PATCHQ_FORMAT_JSON: out = patchq::Format::Json; return true;
    }
    return false;
}

using Renderer = std::string (*)(const patchq::ComparisonTable&, patchq::Format);

patchq_status report(const patchq_design* design, const patchq_options* options, const patchq_cwes* cwes,
                     patchq_format format, char** out, Renderer render) {
    patchq::Format fmt;
    if (!design || !options || !out)
        return bad_argument("null design, options or output pointer");
    if (!format_of(format, fmt))
        return bad_argument("unknown output format");
    return guarded(design->label, [&] {
        static const std::vector<patchq::CweRequirement> none;
        auto table = patchq::compare_options(design->model, options->configs, cwes ? cwes->items : none);
        *out = copy_out(render(table, fmt));
    });
}

} // namespace

extern "C" {

const char* patchq_version(void) { return "1.0.0"; }

const char* patchq_last_error(void) { return last_error.c_str(); }

void patchq_string_free(char* s) { std::free(s); }

patchq_status patchq_design_from_source(const char* source, const char* path_label, const char* top,
                                        patchq_design** out) {
    if (!source || !out)
        return bad_argument("null source or output pointer");
    *out = nullptr;
    const std::string label = path_label ? path_label : "";
    return guarded(label, [&] {
        auto module = patchq::parse_source(source, top ? top : "");
        auto design = std::make_unique<patchq_design>();
        design->model = patchq::elaborate(module);
        design->label = label;
        *out = design.release();
    });
}

void patchq_design_free(patchq_design* design) { delete design; }

size_t patchq_design_signal_count(const patchq_design* design) {
    return design ? design->model.scored_count() : 0;
}

patchq_status patchq_design_diagnostics(const patchq_design* design, char** out) {
    if (!design || !out)
        return bad_argument("null design or output pointer");
    return guarded(design->label, [&] {
        std::string text;
        for (const auto& d : design->model.diagnostics()) {
            std::string prefix = design->label.empty() ? "" : design->label + ":";
            if (d.pos.valid())
                prefix += std::to_string(d.pos.line) + ":" + std::to_string(d.pos.column) + ":";
            text += (prefix.empty() ? "" : prefix + " ") + "warning: " + d.message + "\n";
        }
        *out = copy_out(text);
    });
}

patchq_status patchq_design_dump_graph(const patchq_design* design, char** out_json) {
    if (!design || !out_json)
        return bad_argument("null design or output pointer");
    return guarded(design->label, [&] { *out_json = copy_out(patchq::dump_graph(design->model)); });
}

patchq_status patchq_options_from_json(const patchq_design* design, const char* json, const char* path_label,
                                       patchq_options** out) {
    if (!design || !json || !out)
        return bad_argument("null design, JSON text or output pointer");
    *out = nullptr;
    return guarded(path_label ? path_label : "", [&] {
        auto options = std::make_unique<patchq_options>();
        options->configs = patchq::options_from_json(json, design->model);
        *out = options.release();
    });
}

void patchq_options_free(patchq_options* options) { delete options; }

size_t patchq_options_count(const patchq_options* options) { return options ? options->configs.size() : 0; }

patchq_status patchq_cwes_from_json(const patchq_design* design, const char* json, const char* path_label,
                                    patchq_cwes** out) {
    if (!design || !json || !out)
        return bad_argument("null design, JSON text or output pointer");
    *out = nullptr;
    return guarded(path_label ? path_label : "", [&] {
        auto cwes = std::make_unique<patchq_cwes>();
        cwes->items = patchq::cwes_from_json(json, design->model);
        *out = cwes.release();
    });
}

void patchq_cwes_free(patchq_cwes* cwes) { delete cwes; }

patchq_status patchq_score(const patchq_design* design, const patchq_options* options, const patchq_cwes* cwes,
                           patchq_format format, char** out) {
    return report(design, options, cwes, format, out, &patchq::render_score);
}

patchq_status patchq_compare(const patchq_design* design, const patchq_options* options, const patchq_cwes* cwes,
                             patchq_format format, char** out) {
    return report(design, options, cwes, format, out, &patchq::render_comparison);
}

patchq_status patchq_cwe_check(const patchq_design* design, const patchq_options* options,
                               const patchq_cwes* cwes, patchq_format format, char** out) {
    if (!cwes)
        return bad_argument("a weakness list is required");
    return report(design, options, cwes, format, out, &patchq::render_cwe);
}

patchq_status patchq_suggest(const patchq_design* design, const char* const* candidates, size_t candidate_count,
                             int64_t budget, patchq_strategy strategy, size_t limit, const patchq_cwes* cwes,
                             patchq_format format, char** out) {
    patchq::Format fmt;
    if (!design || !out || (candidate_count && !candidates))
        return bad_argument("null design, candidate list or output pointer");
    if (!format_of(format, fmt))
        return bad_argument("unknown output format");
    if (strategy != PATCHQ_STRATEGY_GREEDY && strategy != PATCHQ_STRATEGY_EXHAUSTIVE)
        return bad_argument("unknown strategy");
    return guarded("", [&] {
        std::vector<std::string> names;
        for (size_t i = 0; i < candidate_count; ++i) {
            if (!candidates[i])
                throw patchq::ConfigError("null candidate name");
            names.emplace_back(candidates[i]);
        }
        const auto s = strategy == PATCHQ_STRATEGY_GREEDY ? patchq::Strategy::Greedy : patchq::Strategy::Exhaustive;
        static const std::vector<patchq::CweRequirement> none;
        auto ranked = patchq::suggest_options(design->model, names, budget, s, cwes ? cwes->items : none, limit);
        *out = copy_out(patchq::render_suggestions(ranked, s, budget, fmt));
    });
}

patchq_status patchq_signal_pc(const patchq_design* design, const patchq_options* options, size_t option_index,
                               const char* signal, char** out) {
    if (!design || !options || !signal || !out)
        return bad_argument("null design, options, signal or output pointer");
    if (option_index >= options->configs.size())
        return bad_argument("option index out of range");
    return guarded(design->label, [&] {
        const auto scores = patchq::compute_pc(design->model, options->configs[option_index]);
        auto it = scores.find(signal);
        if (it == scores.end())
            throw patchq::ConfigError(std::string("unknown signal '") + signal + "'");
        *out = copy_out(patchq::to_decimal(it->second));
    });
}

} // extern "C"
