#include "patchq/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace patchq {

namespace {

// Runs fn(i) for i in [0, n) on a small pool. Results must be written by
// index so the outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::min(std::thread::hardware_concurrency(), 8u)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

bool full(const DataflowModel& model, const ScoreMap& out, const std::string& name) {
    const SignalInfo* info = model.info(name);
    auto it = out.find(name);
    return info && it != out.end() && it->second == info->width;
}

Rational investment_of(const DataflowModel& model, const std::set<std::string>& patched) {
    Rational sum(0);
    for (const auto& n : patched)
        sum += model.info(n)->width;
    return sum;
}

Suggestion make_suggestion(const DataflowModel& model, const std::vector<std::string>& chosen,
                           const std::vector<CweRequirement>& cwes, std::string name) {
    Suggestion s;
    s.config.name = std::move(name);
    s.config.patched.insert(chosen.begin(), chosen.end());
    s.patched = chosen;
    const ScoreMap out = compute_pc(model, s.config);
    s.investment = investment_of(model, s.config.patched);
    for (const auto& [_, v] : out)
        s.output_score += v;
    s.normalized = normalized_score(model, out);
    s.patchable_cwes = patchable_cwes(model, out, cwes);
    return s;
}

bool ranks_before(const Suggestion& a, const Suggestion& b) {
    if (a.normalized != b.normalized)
        return a.normalized > b.normalized;
    if (a.investment != b.investment)
        return a.investment < b.investment;
    return a.patched < b.patched;
}

std::vector<std::string> resolve_candidates(const DataflowModel& model, const std::vector<std::string>& names) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    if (names.empty()) {
        for (std::size_t i : model.scored())
            out.push_back(model.info(i).name);
        return out;
    }
    for (const auto& n : names) {
        auto expanded = model.expand(n);
        if (expanded.empty())
            throw ConfigError("candidate signal '" + n + "' is not in the design");
        for (auto& e : expanded) {
            const SignalInfo* info = model.info(e);
            if (!info || info->excluded)
                throw ConfigError("candidate signal '" + e + "' is excluded from scoring");
            if (seen.insert(e).second)
                out.push_back(std::move(e));
        }
    }
    return out;
}

std::vector<Suggestion> greedy(const DataflowModel& model, const std::vector<std::string>& candidates,
                               std::int64_t budget, const std::vector<CweRequirement>& cwes) {
    std::vector<std::string> chosen;
    std::vector<Suggestion> path{make_suggestion(model, chosen, cwes, "step-0")};
    std::vector<bool> used(candidates.size(), false);
    Rational spent(0);
    for (;;) {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (!used[i] && spent + model.info(candidates[i])->width <= budget)
                open.push_back(i);
        if (open.empty())
            break;
        std::vector<Rational> gain(open.size());
        parallel_for(open.size(), [&](std::size_t k) {
            PatchConfig c;
            c.patched.insert(chosen.begin(), chosen.end());
            c.patched.insert(candidates[open[k]]);
            gain[k] = normalized_score(model, compute_pc(model, c)) - path.back().normalized;
        });
        std::size_t best = 0;
        for (std::size_t k = 1; k < open.size(); ++k) {
            const Rational a = gain[k] / model.info(candidates[open[k]])->width;
            const Rational b = gain[best] / model.info(candidates[open[best]])->width;
            if (a > b || (a == b && candidates[open[k]] < candidates[open[best]]))
                best = k;
        }
        if (gain[best] <= 0)
            break;
        const std::size_t pick = open[best];
        used[pick] = true;
        chosen.push_back(candidates[pick]);
        spent += model.info(candidates[pick])->width;
        path.push_back(make_suggestion(model, chosen, cwes, "step-" + std::to_string(chosen.size())));
    }
    std::stable_sort(path.begin(), path.end(), ranks_before);
    return path;
}

std::vector<Suggestion> exhaustive(const DataflowModel& model, const std::vector<std::string>& candidates,
                                   std::int64_t budget, const std::vector<CweRequirement>& cwes,
                                   std::size_t top_n) {
    if (candidates.size() > kMaxExhaustiveCandidates)
        throw LimitError("exhaustive search is limited to " + std::to_string(kMaxExhaustiveCandidates) +
                         " candidates (got " + std::to_string(candidates.size()) + ")");
    const std::uint64_t subsets = std::uint64_t{1} << candidates.size();
    std::vector<std::uint32_t> widths;
    for (const auto& c : candidates)
        widths.push_back(model.info(c)->width);

    // Each chunk keeps its own best list; merging sorted lists is deterministic.
    const std::size_t chunks = std::min<std::uint64_t>(subsets, 64);
    std::vector<std::vector<Suggestion>> best(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        auto& mine = best[c];
        for (std::uint64_t mask = c; mask < subsets; mask += chunks) {
            std::uint64_t bits = 0;
            std::vector<std::string> chosen;
            for (std::size_t i = 0; i < candidates.size(); ++i)
                if (mask >> i & 1) {
                    bits += widths[i];
                    chosen.push_back(candidates[i]);
                }
            if (bits > static_cast<std::uint64_t>(budget))
                continue;
            mine.push_back(make_suggestion(model, chosen, cwes, ""));
            if (top_n > 0 && mine.size() >= 2 * top_n + 16) {
                std::sort(mine.begin(), mine.end(), ranks_before);
                mine.resize(top_n);
            }
        }
    });
    std::vector<Suggestion> all;
    for (auto& b : best)
        std::move(b.begin(), b.end(), std::back_inserter(all));
    std::sort(all.begin(), all.end(), ranks_before);
    if (top_n > 0 && all.size() > top_n)
        all.resize(top_n);
    for (std::size_t i = 0; i < all.size(); ++i)
        all[i].config.name = "rank-" + std::to_string(i + 1);
    return all;
}

} // namespace

void validate_cwes(const DataflowModel& model, const std::vector<CweRequirement>& cwes) {
    std::set<std::string> ids;
    for (const auto& c : cwes) {
        if (c.id.empty())
            throw ConfigError("weakness entry without an id");
        if (!ids.insert(c.id).second)
            throw ConfigError("duplicate weakness id '" + c.id + "'");
        if (c.alternatives.empty())
            throw ConfigError("weakness '" + c.id + "' has no alternatives");
        for (const auto& alt : c.alternatives) {
            if (alt.empty())
                throw ConfigError("weakness '" + c.id + "' has an empty alternative");
            for (const auto& n : alt) {
                const SignalInfo* info = model.info(n);
                if (!info)
                    throw ConfigError("weakness '" + c.id + "' names unknown signal '" + n + "'");
                if (info->excluded)
                    throw ConfigError("weakness '" + c.id + "' names excluded signal '" + n + "'");
            }
        }
    }
}

Rational normalized_score(const DataflowModel& model, const ScoreMap& out) {
    if (model.scored().empty())
        return Rational(0);
    Rational sum(0);
    for (std::size_t i : model.scored()) {
        const SignalInfo& s = model.info(i);
        auto it = out.find(s.name);
        if (it != out.end())
            sum += it->second / s.width;
    }
    return sum / static_cast<unsigned>(model.scored().size());
}

std::vector<std::string> patchable_cwes(const DataflowModel& model, const ScoreMap& out,
                                        const std::vector<CweRequirement>& cwes) {
    std::vector<std::string> ids;
    for (const auto& c : cwes) {
        const bool ok = std::any_of(c.alternatives.begin(), c.alternatives.end(), [&](const auto& alt) {
            return std::all_of(alt.begin(), alt.end(), [&](const std::string& n) { return full(model, out, n); });
        });
        if (ok)
            ids.push_back(c.id);
    }
    return ids;
}

OptionReport evaluate_option(const DataflowModel& model, const PatchConfig& config,
                             const std::vector<CweRequirement>& cwes) {
    validate_config(model, config);
    const ScoreMap out = compute_pc(model, config);
    const ScoreMap po = config.observed.empty() ? ScoreMap{} : compute_po(model, config);
    OptionReport r;
    r.config = config;
    for (std::size_t i : model.scored()) {
        const SignalInfo& s = model.info(i);
        SignalRow row{s.name, s.width, Rational(config.patched.count(s.name) ? s.width : 0), out.at(s.name),
                      Rational(0)};
        if (auto it = po.find(s.name); it != po.end())
            row.observed_bits = it->second;
        r.investment += row.in_bits;
        r.output_score += row.out_bits;
        r.rows.push_back(std::move(row));
    }
    r.normalized = normalized_score(model, out);
    r.patchable_cwes = patchable_cwes(model, out, cwes);
    return r;
}

ComparisonTable compare_options(const DataflowModel& model, const std::vector<PatchConfig>& configs,
                                const std::vector<CweRequirement>& cwes) {
    if (configs.empty())
        throw ConfigError("no options to compare");
    std::set<std::string> names;
    for (const auto& c : configs)
        if (!names.insert(c.name).second)
            throw ConfigError("duplicate option name '" + c.name + "'");
    validate_cwes(model, cwes);
    ComparisonTable t;
    t.cwes = cwes;
    t.options.resize(configs.size());
    parallel_for(configs.size(), [&](std::size_t i) { t.options[i] = evaluate_option(model, configs[i], cwes); });
    return t;
}

const char* to_string(Strategy s) { return s == Strategy::Greedy ? "greedy" : "exhaustive"; }

std::vector<Suggestion> suggest_options(const DataflowModel& model, std::vector<std::string> candidates,
                                        std::int64_t budget, Strategy strategy,
                                        const std::vector<CweRequirement>& cwes, std::size_t top_n) {
    if (budget < 0)
        throw ConfigError("budget must be non-negative (got " + std::to_string(budget) + ")");
    validate_cwes(model, cwes);
    const auto resolved = resolve_candidates(model, candidates);
    if (strategy == Strategy::Greedy)
        return greedy(model, resolved, budget, cwes);
    return exhaustive(model, resolved, budget, cwes, top_n);
}

} // namespace patchq
