#include <srg/errors.hpp>
#include <srg/miner.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <sstream>
#include <thread>

namespace srg {

std::string_view to_string(Algorithm algorithm)
{
    switch (algorithm) {
    case Algorithm::srg0:
        return "srg0";
    case Algorithm::srg1:
        return "srg1";
    case Algorithm::srg2:
        return "srg2";
    case Algorithm::srg3:
        return "srg3";
    case Algorithm::srg4:
        return "srg4";
    case Algorithm::srg5:
        return "srg5";
    }
    return "srg1";
}

Algorithm parse_algorithm(std::string_view text)
{
    for (auto a : {Algorithm::srg0, Algorithm::srg1, Algorithm::srg2, Algorithm::srg3, Algorithm::srg4, Algorithm::srg5})
        if (to_string(a) == text)
            return a;
    throw ValidationError("unknown algorithm '" + std::string(text) + "'");
}

unsigned worker_count()
{
    if (const char * env = std::getenv("SRG_THREADS")) {
        char * end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {
    template <typename F>
    void parallel_for(std::size_t n, F && f)
    {
        unsigned workers = std::min<std::size_t>(worker_count(), n);
        if (workers <= 1) {
            for (std::size_t i = 0; i < n; ++i)
                f(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(n);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        f(i);
                    }
                    catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (auto & t : pool)
            t.join();
        for (auto & e : errors)
            if (e)
                std::rethrow_exception(e);
    }
}

std::vector<Rule> MiningResult::rules() const
{
    std::vector<Rule> out;
    for (auto & s : selected)
        out.push_back(s.scored.rule);
    return out;
}

std::vector<std::vector<ScoredRule>> generate_candidates(const Dataset & dataset, ClassId target,
    const std::vector<AttributeGroup> & groups, const Thresholds & thresholds, const GenerationOptions & options)
{
    RuleGenerator generator(dataset, target, thresholds);
    std::vector<std::vector<ScoredRule>> out(groups.size());
    parallel_for(groups.size(), [&](std::size_t g) {
        auto rules = generator.generate(groups[g], options).rules;
        for (auto & r : rules)
            r.group = static_cast<int>(g);
        out[g] = std::move(rules);
    });
    return out;
}

std::vector<AttributeFrequency> most_frequent_attributes(const std::vector<std::vector<ScoredRule>> & rules_by_group,
    double threshold)
{
    std::map<int, Ratio> best;
    auto limit = std::llround(threshold * 1e6);
    for (auto & group : rules_by_group) {
        if (group.empty())
            continue;
        std::map<int, std::int64_t> uses;
        for (auto & r : group)
            for (int a : r.rule.attributes())
                ++uses[a];
        auto total = static_cast<std::int64_t>(group.size());
        for (auto & [a, n] : uses) {
            if (n * 1000000 < limit * total)
                continue;
            Ratio share(n, total);
            auto it = best.find(a);
            if (it == best.end() || it->second < share)
                best[a] = share;
        }
    }
    std::vector<AttributeFrequency> out;
    for (auto & [a, s] : best)
        out.push_back({a, s});
    std::stable_sort(out.begin(), out.end(), [](auto & x, auto & y) { return y.share < x.share; });
    return out;
}

namespace {
    struct Candidate {
        const ScoredRule * scored;
        CaseSet covered;
        CaseSet correct;
    };

    std::vector<Candidate> pool_of(const std::vector<std::vector<ScoredRule>> & by_group, const CaseIndex & index)
    {
        std::vector<const ScoredRule *> flat;
        for (auto & g : by_group)
            for (auto & r : g)
                flat.push_back(&r);
        std::stable_sort(flat.begin(), flat.end(), [](auto * a, auto * b) { return a->rule < b->rule; });
        std::vector<Candidate> pool;
        for (auto * r : flat) {
            if (! pool.empty() && pool.back().scored->rule == r->rule)
                continue;
            auto cs = index.cases(r->rule);
            auto ok = cs & index.target_cases();
            pool.push_back({r, std::move(cs), std::move(ok)});
        }
        return pool;
    }

    // Covered descending, then correct descending, then rule order.
    void sort_by_coverage(std::vector<Candidate> & pool)
    {
        std::stable_sort(pool.begin(), pool.end(), [](const Candidate & a, const Candidate & b) {
            auto & ma = a.scored->metrics;
            auto & mb = b.scored->metrics;
            if (ma.covered() != mb.covered())
                return ma.covered() > mb.covered();
            if (ma.correct != mb.correct)
                return ma.correct > mb.correct;
            return a.scored->rule < b.scored->rule;
        });
    }

    MiningResult blank(Algorithm algorithm, const std::vector<AttributeGroup> & groups, const Thresholds & thresholds,
        ClassId target, std::size_t candidates)
    {
        MiningResult r;
        r.algorithm = algorithm;
        r.groups = groups;
        r.thresholds = thresholds;
        r.target = target;
        r.candidates = candidates;
        return r;
    }

    void finish(MiningResult & result, const Dataset & dataset)
    {
        if (result.predictors.empty())
            for (auto & s : result.selected)
                result.predictors.emplace_back(s.scored.rule);
        result.summary = summarize(result.predictors, result.selected.size(), dataset, result.target);
    }

    MiningResult select_srg0(const Dataset & dataset, const CaseIndex & index,
        const std::vector<std::vector<ScoredRule>> & by_group, const std::vector<AttributeGroup> & groups,
        const Thresholds & thresholds)
    {
        auto pool = pool_of(by_group, index);
        auto result = blank(Algorithm::srg0, groups, thresholds, index.target(), pool.size());
        sort_by_coverage(pool);
        CaseSet done(dataset.size());
        for (auto & c : pool) {
            if (c.scored->metrics.incorrect != 0)
                continue;
            auto added = (c.correct - done).count();
            if (added == 0)
                continue;
            done |= c.correct;
            result.selected.push_back({*c.scored, added});
        }
        finish(result, dataset);
        return result;
    }

    MiningResult select_srg1(const Dataset & dataset, const CaseIndex & index,
        const std::vector<std::vector<ScoredRule>> & by_group, const std::vector<AttributeGroup> & groups,
        const Thresholds & thresholds)
    {
        auto pool = pool_of(by_group, index);
        auto result = blank(Algorithm::srg1, groups, thresholds, index.target(), pool.size());
        CaseSet done(dataset.size());
        std::vector<bool> taken(pool.size(), false);
        while (true) {
            std::size_t best = pool.size();
            std::size_t best_gain = 0;
            for (std::size_t i = 0; i < pool.size(); ++i) {
                if (taken[i])
                    continue;
                auto gain = (pool[i].correct - done).count();
                if (gain == 0)
                    continue;
                bool better = best == pool.size() || gain > best_gain;
                if (! better && gain == best_gain) {
                    auto & m = pool[i].scored->metrics;
                    auto & b = pool[best].scored->metrics;
                    if (m.covered() != b.covered())
                        better = m.covered() > b.covered();
                    else if (! (m.precision() == b.precision()))
                        better = b.precision() < m.precision();
                    else
                        better = pool[i].scored->rule < pool[best].scored->rule;
                }
                if (better) {
                    best = i;
                    best_gain = gain;
                }
            }
            if (best == pool.size())
                break;
            taken[best] = true;
            done |= pool[best].correct;
            result.selected.push_back({*pool[best].scored, best_gain});
        }
        for (std::size_t i = 0; i < result.selected.size(); ++i)
            for (std::size_t j = i + 1; j < result.selected.size(); ++j)
                result.overlaps.push_back({i, j,
                    overlap(result.selected[i].scored.rule, result.selected[j].scored.rule, dataset, index.target())});
        finish(result, dataset);
        return result;
    }

    MiningResult select_srg2(const Dataset & dataset, const CaseIndex & index,
        const std::vector<std::vector<ScoredRule>> & by_group, const std::vector<AttributeGroup> & groups,
        const Thresholds & thresholds, const GenerationOptions & options)
    {
        auto pool = pool_of(by_group, index);
        auto result = blank(Algorithm::srg2, groups, thresholds, index.target(), pool.size());
        sort_by_coverage(pool);
        auto limit = std::llround(thresholds.min_precision * 1e6);
        const auto & target = index.target_cases();
        CaseSet reached(dataset.size());
        std::vector<CaseSet> selected_cases;
        for (auto & c : pool) {
            auto fresh = c.covered - reached;
            auto dc = static_cast<std::int64_t>(CaseSet::intersect_count(fresh, target));
            auto dm = static_cast<std::int64_t>(fresh.count()) - dc;
            if (dc == 0 || dc * 1000000 < limit * (dc + dm))
                continue;
            reached |= c.covered;
            result.selected.push_back({*c.scored, static_cast<std::size_t>(dc)});
            selected_cases.push_back(c.covered);
        }

        auto wrong = reached - target;
        result.misclassified_before_repair = wrong.count();
        if (wrong.any()) {
            ClassId other = dataset.other_class(index.target());
            auto rows = (wrong | target).indices();
            auto focus = dataset.subset(rows);
            Thresholds strict{1.0, thresholds.min_coverage};
            auto comp_by_group = generate_candidates(focus, other, groups, strict, options);
            CaseIndex full_other(dataset, other);

            struct Comp {
                const ScoredRule * scored;
                Rule rule;
                CaseSet covered;
                RuleMetrics metrics;
            };
            std::vector<Comp> comps;
            for (auto & c : pool_of(comp_by_group, CaseIndex(focus, other))) {
                auto cs = full_other.cases(c.scored->rule);
                // Requirement 2: never fire on a target-class case of the full data.
                if (CaseSet::intersect_count(cs, target) != 0)
                    continue;
                comps.push_back({c.scored, c.scored->rule, cs, full_other.metrics(c.scored->rule)});
            }

            CaseSet repaired(dataset.size());
            std::vector<bool> taken(comps.size(), false);
            while (true) {
                std::size_t best = comps.size();
                std::size_t best_gain = 0;
                for (std::size_t i = 0; i < comps.size(); ++i) {
                    if (taken[i])
                        continue;
                    // Requirement 1: cover previously misclassified cases.
                    auto gain = ((comps[i].covered & wrong) - repaired).count();
                    if (gain == 0)
                        continue;
                    bool better = best == comps.size() || gain > best_gain;
                    if (! better && gain == best_gain) {
                        auto a = comps[i].metrics.covered(), b = comps[best].metrics.covered();
                        better = a != b ? a > b : comps[i].rule < comps[best].rule;
                    }
                    if (better) {
                        best = i;
                        best_gain = gain;
                    }
                }
                if (best == comps.size())
                    break;
                taken[best] = true;
                repaired |= comps[best].covered & wrong;
                result.complementary.push_back(
                    {ScoredRule{comps[best].rule, comps[best].metrics, comps[best].scored->group}, best_gain});
            }

            for (std::size_t i = 0; i < result.selected.size(); ++i) {
                auto errors = selected_cases[i] - target;
                std::vector<Rule> subtract;
                if (errors.any())
                    for (auto & c : result.complementary) {
                        auto cs = full_other.cases(c.scored.rule);
                        if (CaseSet::intersect_count(cs, errors) != 0)
                            subtract.push_back(c.scored.rule);
                    }
                result.predictors.push_back(combine(result.selected[i].scored.rule, std::move(subtract)));
            }
        }
        finish(result, dataset);
        result.precision_not_improved =
            result.misclassified_before_repair > 0 && result.summary.misclassified >= result.misclassified_before_repair;
        return result;
    }

    std::vector<AttributeGroup> frequent_groups(const std::vector<AttributeFrequency> & freq, int group_size)
    {
        std::vector<int> attrs;
        for (auto & f : freq)
            attrs.push_back(f.attribute);
        if (attrs.empty())
            throw ValidationError("no attribute reaches the frequency threshold");
        return chunk(attrs, group_size);
    }
}

MiningResult srg0(const Dataset & dataset, const std::vector<AttributeGroup> & groups, const Thresholds & thresholds,
    ClassId target, const GenerationOptions & options)
{
    CaseIndex index(dataset, target);
    return select_srg0(dataset, index, generate_candidates(dataset, target, groups, thresholds, options), groups,
        thresholds);
}

MiningResult srg1(const Dataset & dataset, const std::vector<AttributeGroup> & groups, const Thresholds & thresholds,
    ClassId target, const GenerationOptions & options)
{
    CaseIndex index(dataset, target);
    return select_srg1(dataset, index, generate_candidates(dataset, target, groups, thresholds, options), groups,
        thresholds);
}

MiningResult srg2(const Dataset & dataset, const std::vector<AttributeGroup> & groups, const Thresholds & thresholds,
    ClassId target, const GenerationOptions & options)
{
    CaseIndex index(dataset, target);
    return select_srg2(dataset, index, generate_candidates(dataset, target, groups, thresholds, options), groups,
        thresholds, options);
}

MiningResult srg2_from_prior(const Dataset & dataset, const std::vector<std::vector<ScoredRule>> & prior_rules,
    const Thresholds & thresholds, ClassId target, int group_size, double frequency_threshold,
    const GenerationOptions & options)
{
    auto freq = most_frequent_attributes(prior_rules, frequency_threshold);
    auto result = srg2(dataset, frequent_groups(freq, group_size), thresholds, target, options);
    result.attribute_frequency = std::move(freq);
    return result;
}

MiningResult srg3(const Dataset & dataset, const GroupingStrategy & random_grouping, Algorithm base,
    const Thresholds & thresholds, ClassId target, int regroup_size, const GenerationOptions & options)
{
    auto groups = form_groups(random_grouping, dataset.width());
    auto candidates = generate_candidates(dataset, target, groups, thresholds, options);
    MiningResult result;
    if (base == Algorithm::srg2) {
        result = srg2_from_prior(dataset, candidates, thresholds, target, regroup_size, random_grouping.threshold,
            options);
    }
    else if (base == Algorithm::srg1) {
        CaseIndex index(dataset, target);
        result = select_srg1(dataset, index, candidates, groups, thresholds);
        result.attribute_frequency = most_frequent_attributes(candidates, random_grouping.threshold);
    }
    else
        throw ValidationError("srg3 delegates to srg1 or srg2");
    result.algorithm = Algorithm::srg3;
    return result;
}

MiningResult srg4(const Dataset & dataset, const std::vector<AttributeGroup> & expert_groups, Algorithm base,
    const Thresholds & thresholds, ClassId target, const GenerationOptions & options)
{
    for (auto & g : expert_groups)
        for (int a : g)
            if (a < 1 || a > dataset.width())
                throw ValidationError("expert group references unknown attribute x" + std::to_string(a));
    MiningResult result;
    if (base == Algorithm::srg2)
        result = srg2(dataset, expert_groups, thresholds, target, options);
    else if (base == Algorithm::srg1)
        result = srg1(dataset, expert_groups, thresholds, target, options);
    else if (base == Algorithm::srg0)
        result = srg0(dataset, expert_groups, thresholds, target, options);
    else
        throw ValidationError("srg4 and srg5 delegate to srg0, srg1 or srg2");
    result.algorithm = Algorithm::srg4;
    return result;
}

MiningResult srg5(const Dataset & dataset, const std::vector<int> & attributes, int group_size, Algorithm base,
    const Thresholds & thresholds, ClassId target, const GenerationOptions & options)
{
    GroupingStrategy s;
    s.kind = GroupingStrategy::Kind::prior_attributes;
    s.attributes = attributes;
    s.size = group_size;
    auto result = srg4(dataset, form_groups(s, dataset.width()), base, thresholds, target, options);
    result.algorithm = Algorithm::srg5;
    return result;
}

MiningResult run_miner(const Dataset & dataset, const MinerConfig & config)
{
    config.thresholds.validate();
    if (! dataset.class_schema().codebook.contains(config.target))
        throw ValidationError("unknown target class C" + std::to_string(config.target));
    auto & g = config.grouping;
    using Kind = GroupingStrategy::Kind;

    if (g.kind == Kind::most_frequent && config.algorithm != Algorithm::srg3) {
        auto prior = config.prior_grouping.value_or(GroupingStrategy{});
        auto prior_groups = form_groups(prior, dataset.width());
        auto candidates = generate_candidates(dataset, config.target, prior_groups, config.thresholds, config.generation);
        auto freq = most_frequent_attributes(candidates, g.threshold);
        auto groups = frequent_groups(freq, g.size);
        MiningResult result;
        switch (config.algorithm) {
        case Algorithm::srg0:
            result = srg0(dataset, groups, config.thresholds, config.target, config.generation);
            break;
        case Algorithm::srg1:
            result = srg1(dataset, groups, config.thresholds, config.target, config.generation);
            break;
        default:
            result = srg2(dataset, groups, config.thresholds, config.target, config.generation);
            break;
        }
        result.algorithm = config.algorithm;
        result.attribute_frequency = std::move(freq);
        return result;
    }

    switch (config.algorithm) {
    case Algorithm::srg0:
        return srg0(dataset, form_groups(g, dataset.width()), config.thresholds, config.target, config.generation);
    case Algorithm::srg1:
        return srg1(dataset, form_groups(g, dataset.width()), config.thresholds, config.target, config.generation);
    case Algorithm::srg2:
        return srg2(dataset, form_groups(g, dataset.width()), config.thresholds, config.target, config.generation);
    case Algorithm::srg3: {
        if (g.kind != Kind::random)
            throw ValidationError("srg3 needs random grouping");
        auto regroup = config.prior_grouping ? config.prior_grouping->size : 4;
        return srg3(dataset, g, config.base, config.thresholds, config.target, regroup, config.generation);
    }
    case Algorithm::srg4:
        return srg4(dataset, form_groups(g, dataset.width()), config.base, config.thresholds, config.target,
            config.generation);
    case Algorithm::srg5: {
        if (g.kind == Kind::random)
            throw ValidationError("srg5 needs a prior attribute list or explicit groups");
        auto result = srg4(dataset, form_groups(g, dataset.width()), config.base, config.thresholds, config.target,
            config.generation);
        result.algorithm = Algorithm::srg5;
        return result;
    }
    }
    throw ValidationError("unknown algorithm");
}

MiningSummary summarize(const std::vector<CombinedRule> & predictors, std::size_t rules_selected,
    const Dataset & dataset, ClassId target)
{
    MiningSummary s;
    s.rules_selected = rules_selected;
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        bool is_target = dataset.label(r) == target;
        s.target_cases += is_target;
        bool fires = std::any_of(predictors.begin(), predictors.end(),
            [&](const CombinedRule & p) { return p.matches(dataset.row(r)); });
        if (fires) {
            ++s.cases_covered;
            (is_target ? s.cases_correct : s.misclassified)++;
        }
        else if (is_target)
            ++s.unclassified_target;
    }
    return s;
}

namespace {
    nlohmann::json thresholds_json(const Thresholds & t)
    {
        return {{"precision", t.min_precision}, {"coverage", t.min_coverage}};
    }

    nlohmann::json policy_json(const TraversalPolicy & p)
    {
        const char * start = p.start == StartPoint::bottom ? "bottom" : p.start == StartPoint::top ? "top" : "middle";
        return {{"start", start}, {"order", p.order == ChainOrder::given ? "given" : "longest-first"}};
    }
}

nlohmann::json config_to_json(const MinerConfig & c)
{
    nlohmann::json j;
    j["algorithm"] = to_string(c.algorithm);
    j["grouping"] = grouping_to_json(c.grouping);
    j["thresholds"] = thresholds_json(c.thresholds);
    j["seed"] = c.seed;
    j["target_class"] = c.target;
    j["base"] = to_string(c.base);
    if (c.prior_grouping)
        j["prior_grouping"] = grouping_to_json(*c.prior_grouping);
    j["policy"] = policy_json(c.generation.policy);
    j["max_group_size"] = c.generation.max_group_size;
    j["prune"] = c.generation.prune;
    return j;
}

MinerConfig config_from_json(const nlohmann::json & j)
{
    try {
        MinerConfig c;
        c.algorithm = parse_algorithm(j.value("algorithm", std::string("srg1")));
        c.seed = j.value("seed", std::uint64_t{1});
        if (j.contains("grouping"))
            c.grouping = grouping_from_json(j["grouping"]);
        if (! j.contains("grouping") || ! j["grouping"].contains("seed"))
            c.grouping.seed = c.seed;
        if (j.contains("thresholds")) {
            c.thresholds.min_precision = j["thresholds"].value("precision", 1.0);
            c.thresholds.min_coverage = j["thresholds"].value("coverage", 0.005);
        }
        c.target = j.value("target_class", 1);
        c.base = parse_algorithm(j.value("base", std::string("srg1")));
        if (j.contains("prior_grouping"))
            c.prior_grouping = grouping_from_json(j["prior_grouping"]);
        if (j.contains("policy")) {
            c.generation.policy.start = parse_start_point(j["policy"].value("start", std::string("bottom")));
            auto order = j["policy"].value("order", std::string("given"));
            if (order != "given" && order != "longest-first")
                throw ValidationError("chain order must be given or longest-first");
            c.generation.policy.order = order == "given" ? ChainOrder::given : ChainOrder::longest_first;
        }
        c.generation.max_group_size = j.value("max_group_size", 6);
        c.generation.prune = j.value("prune", true);
        c.thresholds.validate();
        return c;
    }
    catch (const nlohmann::json::exception & e) {
        throw ValidationError(std::string("malformed miner config: ") + e.what());
    }
}

namespace {
    nlohmann::json selected_json(const SelectedRule & s, std::size_t id)
    {
        return {
            {"id", "R" + std::to_string(id)},
            {"text", s.scored.rule.text()},
            {"rule", rule_to_json(s.scored.rule)},
            {"metrics", metrics_to_json(s.scored.metrics)},
            {"group", s.scored.group},
            {"added", s.added},
        };
    }

    std::string percent(const Ratio & r) { return percent_string(r); }
}

nlohmann::json result_to_json(const MiningResult & r)
{
    nlohmann::json j;
    j["algorithm"] = to_string(r.algorithm);
    j["target_class"] = r.target;
    j["thresholds"] = thresholds_json(r.thresholds);
    j["groups"] = r.groups;
    j["candidates"] = r.candidates;
    j["rules"] = nlohmann::json::array();
    std::size_t id = 1;
    for (auto & s : r.selected)
        j["rules"].push_back(selected_json(s, id++));
    j["complementary"] = nlohmann::json::array();
    for (auto & s : r.complementary)
        j["complementary"].push_back(selected_json(s, id++));
    j["combined"] = nlohmann::json::array();
    for (auto & p : r.predictors)
        if (! p.subtracted.empty())
            j["combined"].push_back(combined_to_json(p));
    j["overlaps"] = nlohmann::json::array();
    for (auto & o : r.overlaps)
        j["overlaps"].push_back({
            {"first", "R" + std::to_string(o.first + 1)},
            {"second", "R" + std::to_string(o.second + 1)},
            {"union", o.report.union_cases},
            {"overlap", o.report.overlap_cases},
            {"overlap_pct", rounded_percent(o.report.overlap_pct())},
            {"added", o.report.added_cases},
            {"added_pct", rounded_percent(o.report.added_pct())},
        });
    j["attribute_frequency"] = nlohmann::json::array();
    for (auto & f : r.attribute_frequency)
        j["attribute_frequency"].push_back({{"attr", f.attribute}, {"share", rounded_percent(f.share)}});
    auto & s = r.summary;
    j["summary"] = {
        {"rules_selected", s.rules_selected},
        {"complementary_rules", r.complementary.size()},
        {"target_cases", s.target_cases},
        {"cases_covered", s.cases_covered},
        {"cases_correct", s.cases_correct},
        {"misclassified_before_repair", r.misclassified_before_repair},
        {"misclassified", s.misclassified},
        {"unclassified_target", s.unclassified_target},
        {"actual_precision_pct", rounded_percent(s.actual_precision())},
        {"actual_coverage_pct", rounded_percent(s.actual_coverage())},
    };
    j["flags"] = {{"precision_not_improved", r.precision_not_improved}};
    return j;
}

std::string text_report(const MiningResult & r)
{
    std::ostringstream os;
    auto algo = std::string(to_string(r.algorithm));
    std::transform(algo.begin(), algo.end(), algo.begin(), ::toupper);
    os << "Algorithm: " << algo << '\n';
    os << "Target class: C" << r.target << '\n';
    os << "Precision threshold, %: " << percent(Ratio(std::llround(r.thresholds.min_precision * 1e6), 1000000)) << '\n';
    os << "Coverage threshold, %: " << percent(Ratio(std::llround(r.thresholds.min_coverage * 1e6), 1000000)) << '\n';
    os << "Groups:";
    for (auto & g : r.groups) {
        os << " {";
        for (std::size_t i = 0; i < g.size(); ++i)
            os << (i ? "," : "") << g[i];
        os << '}';
    }
    os << '\n';
    os << "Candidate rules: " << r.candidates << '\n';
    std::size_t id = 1;
    auto row = [&](const SelectedRule & s) {
        auto & m = s.scored.metrics;
        os << 'R' << id++ << ": " << s.scored.rule.text() << '\n';
        os << "  Total cases predicted: " << m.covered() << "; Correct: " << m.correct << "; Incorrect: " << m.incorrect
           << "; Precision, %: " << percent(m.precision()) << "; Coverage, %: " << percent(m.coverage())
           << "; Added cases: " << s.added << '\n';
    };
    for (auto & s : r.selected)
        row(s);
    if (! r.complementary.empty()) {
        os << "Complementary rules:\n";
        for (auto & s : r.complementary)
            row(s);
    }
    std::size_t combined = 0;
    for (auto & p : r.predictors)
        if (! p.subtracted.empty())
            os << "RN" << ++combined << ": " << p.text() << '\n';
    auto & s = r.summary;
    os << "Number of rules selected: " << s.rules_selected << '\n';
    os << "Number of complementary rules: " << r.complementary.size() << '\n';
    os << "Number of cases covered by all rules: " << s.cases_covered << '\n';
    os << "Number of correctly classified cases: " << s.cases_correct << '\n';
    os << "Number of misclassified cases before repair: " << r.misclassified_before_repair << '\n';
    os << "Number of misclassified cases by all rules: " << s.misclassified << '\n';
    os << "Number of unclassified cases of the target class: " << s.unclassified_target << '\n';
    os << "Actual precision, %: " << percent(s.actual_precision()) << '\n';
    os << "Actual coverage of the target class, %: " << percent(s.actual_coverage()) << '\n';
    os << "Precision not improved: " << (r.precision_not_improved ? "yes" : "no") << '\n';
    return os.str();
}

std::string overlap_table(const std::vector<Rule> & rules, const Dataset & dataset, ClassId cls)
{
    std::ostringstream os;
    os << "Rules | Union cases | Overlap cases | Overlap, % | Added cases | Added cases, %\n";
    for (std::size_t i = 0; i < rules.size(); ++i)
        for (std::size_t j = i + 1; j < rules.size(); ++j) {
            auto o = overlap(rules[i], rules[j], dataset, cls);
            os << 'R' << i + 1 << "/R" << j + 1 << " | " << o.union_cases << " | " << o.overlap_cases << " | "
               << percent(o.overlap_pct()) << " | " << o.added_cases << " | " << percent(o.added_pct()) << '\n';
        }
    return os.str();
}

}
