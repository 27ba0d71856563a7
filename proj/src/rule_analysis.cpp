#include <srg/errors.hpp>
#include <srg/rule_analysis.hpp>

#include <algorithm>
#include <map>

namespace srg {

nlohmann::json metrics_to_json(const RuleMetrics & m)
{
    return {
        {"n", m.n},
        {"correct", m.correct},
        {"incorrect", m.incorrect},
        {"covered", m.covered()},
        {"recall", rounded_percent(m.recall())},
        {"precision", rounded_percent(m.precision())},
        {"coverage", rounded_percent(m.coverage())},
    };
}

CaseSet cases(const Rule & rule, const Dataset & dataset)
{
    CaseSet out(dataset.size());
    for (std::size_t r = 0; r < dataset.size(); ++r)
        if (rule.matches(dataset.row(r)))
            out.set(r);
    return out;
}

CaseSet cases(const CombinedRule & rule, const Dataset & dataset)
{
    CaseSet out(dataset.size());
    for (std::size_t r = 0; r < dataset.size(); ++r)
        if (rule.matches(dataset.row(r)))
            out.set(r);
    return out;
}

CaseSet class_cases(const Dataset & dataset, ClassId cls)
{
    CaseSet out(dataset.size());
    for (std::size_t r = 0; r < dataset.size(); ++r)
        if (dataset.label(r) == cls)
            out.set(r);
    return out;
}

namespace {
    template <typename R>
    RuleMetrics metrics_impl(const R & rule, ClassId target, const Dataset & dataset, MetricScope scope)
    {
        RuleMetrics m;
        for (std::size_t r = 0; r < dataset.size(); ++r) {
            bool fires = rule.matches(dataset.row(r));
            bool is_target = dataset.label(r) == target;
            if (scope == MetricScope::target_class) {
                m.n += is_target;
                if (fires)
                    (is_target ? m.correct : m.incorrect)++;
            }
            else {
                ++m.n;
                (fires == is_target ? m.correct : m.incorrect)++;
            }
        }
        return m;
    }
}

RuleMetrics metrics(const Rule & rule, const Dataset & dataset, MetricScope scope)
{
    return metrics_impl(rule, rule.target(), dataset, scope);
}

RuleMetrics metrics(const CombinedRule & rule, const Dataset & dataset, MetricScope scope)
{
    return metrics_impl(rule, rule.target, dataset, scope);
}

Complexity complexity(std::span<const Rule> rules, const Dataset & dataset, Counting counting)
{
    if (rules.empty())
        throw ValidationError("complexity needs at least one rule");
    Complexity c;
    CaseSet all(dataset.size());
    for (auto & r : rules) {
        c.clauses += r.base_clause_count();
        auto s = cases(r, dataset);
        if (counting == Counting::independent)
            c.covered += static_cast<std::int64_t>(s.count());
        else
            all |= s;
    }
    if (counting == Counting::distinct)
        c.covered = static_cast<std::int64_t>(all.count());
    if (c.covered == 0)
        throw NumericError("complexity is undefined: the rules cover no cases");
    return c;
}

OverlapReport overlap(const Rule & r1, const Rule & r2, const Dataset & dataset, ClassId cls)
{
    auto target = class_cases(dataset, cls);
    auto a = cases(r1, dataset) & target;
    auto b = cases(r2, dataset) & target;
    OverlapReport o;
    o.union_cases = static_cast<std::int64_t>((a | b).count());
    o.overlap_cases = static_cast<std::int64_t>(CaseSet::intersect_count(a, b));
    o.added_cases = static_cast<std::int64_t>((b - a).count());
    o.uncovered_by_first = static_cast<std::int64_t>(target.count() - a.count());
    return o;
}

CombinedRule reverse_rule(const Rule & rule, ClassId other_class)
{
    return reverse_rule(CombinedRule(rule), other_class);
}

CombinedRule reverse_rule(const CombinedRule & rule, ClassId other_class)
{
    CombinedRule out = rule;
    out.negated = ! rule.negated;
    out.target = other_class;
    return out;
}

std::vector<Rule> merge_rules(std::vector<Rule> rules)
{
    auto normalise = [](std::vector<Rule> & rs) {
        std::sort(rs.begin(), rs.end());
        rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    };
    normalise(rules);

    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> attrs;
        for (auto & r : rules)
            for (auto a : r.attributes())
                attrs.push_back(a);
        std::sort(attrs.begin(), attrs.end());
        attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());

        for (int a : attrs) {
            using Key = std::pair<ClassId, std::vector<Clause>>;
            std::map<Key, std::vector<std::size_t>> siblings;
            for (std::size_t i = 0; i < rules.size(); ++i) {
                auto * c = rules[i].clause_for(a);
                if (! c || c->polarity != Polarity::include)
                    continue;
                std::vector<Clause> rest;
                for (auto & other : rules[i].clauses())
                    if (other.attribute != a)
                        rest.push_back(other);
                siblings[{rules[i].target(), std::move(rest)}].push_back(i);
            }

            std::vector<bool> drop(rules.size(), false);
            std::vector<Rule> added;
            for (auto & [key, members] : siblings) {
                if (members.size() < 2)
                    continue;
                std::vector<Code> values;
                for (auto i : members) {
                    auto & vs = rules[i].clause_for(a)->values;
                    values.insert(values.end(), vs.begin(), vs.end());
                    drop[i] = true;
                }
                auto clauses = key.second;
                clauses.push_back(Clause::in(a, values));
                added.emplace_back(std::move(clauses), key.first);
            }
            if (added.empty())
                continue;
            std::vector<Rule> next;
            for (std::size_t i = 0; i < rules.size(); ++i)
                if (! drop[i])
                    next.push_back(std::move(rules[i]));
            for (auto & r : added)
                next.push_back(std::move(r));
            normalise(next);
            rules = std::move(next);
            changed = true;
        }
    }
    return rules;
}

CombinedRule combine(const Rule & base, std::vector<Rule> complementary)
{
    for (auto & c : complementary)
        if (c.target() == base.target())
            throw ValidationError("complementary rules must target the opposite class");
    return CombinedRule(base, std::move(complementary), base.target());
}

namespace {
    template <typename R, typename Target>
    Prediction predict_impl(std::span<const R> rules, std::span<const Code> row, Target target_of)
    {
        Prediction p;
        for (auto & r : rules)
            if (r.matches(row)) {
                ++p.votes;
                ++p.votes_by_class[target_of(r)];
            }
        if (p.votes == 0)
            p.status = Prediction::Status::unclassified;
        else if (p.votes_by_class.size() > 1)
            p.status = Prediction::Status::conflict;
        else {
            p.status = Prediction::Status::classified;
            p.cls = p.votes_by_class.begin()->first;
        }
        return p;
    }
}

Prediction predict(std::span<const CombinedRule> rules, std::span<const Code> row)
{
    return predict_impl(rules, row, [](const CombinedRule & r) { return r.target; });
}

Prediction predict(std::span<const Rule> rules, std::span<const Code> row)
{
    return predict_impl(rules, row, [](const Rule & r) { return r.target(); });
}

}
