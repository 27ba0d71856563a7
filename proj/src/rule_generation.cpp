#include <srg/errors.hpp>
#include <srg/rule_generation.hpp>

#include <algorithm>
#include <cmath>
#include <optional>

namespace srg {

void Thresholds::validate() const
{
    if (! (min_precision > 0 && min_precision <= 1))
        throw ValidationError("precision threshold must lie in (0, 1]");
    if (! (min_coverage > 0))
        throw ValidationError("coverage threshold must be positive");
}

CaseIndex::CaseIndex(const Dataset & dataset, ClassId target) :
    dataset_(&dataset), target_(target), target_cases_(class_cases(dataset, target))
{
    target_size_ = target_cases_.count();
    int width = dataset.width();
    eq_.resize(width);
    neq_.resize(width);
    observed_.resize(width);
    for (int a = 1; a <= width; ++a) {
        auto k = dataset.attribute(a).codebook.size();
        eq_[a - 1].assign(k + 1, CaseSet(dataset.size()));
        for (std::size_t r = 0; r < dataset.size(); ++r)
            eq_[a - 1][dataset.at(r, a)].set(r);
        neq_[a - 1].resize(k + 1);
        for (Code c = 1; c <= static_cast<Code>(k); ++c) {
            neq_[a - 1][c] = eq_[a - 1][c].complement();
            if (eq_[a - 1][c].any())
                observed_[a - 1].push_back(c);
        }
    }
}

CaseSet CaseIndex::cases(const Rule & rule) const
{
    CaseSet out(dataset_->size(), true);
    for (auto & c : rule.clauses()) {
        CaseSet in(dataset_->size());
        for (auto v : c.values)
            if (dataset_->attribute(c.attribute).codebook.contains(v))
                in |= eq_[c.attribute - 1][v];
        if (c.polarity == Polarity::include)
            out &= in;
        else
            out.subtract(in);
    }
    return out;
}

RuleMetrics CaseIndex::metrics(const Rule & rule) const
{
    auto covered = cases(rule);
    RuleMetrics m;
    m.n = static_cast<std::int64_t>(target_size_);
    m.correct = static_cast<std::int64_t>(CaseSet::intersect_count(covered, target_cases_));
    m.incorrect = static_cast<std::int64_t>(covered.count()) - m.correct;
    return m;
}

RuleGenerator::RuleGenerator(const Dataset & dataset, ClassId target, Thresholds thresholds) :
    index_(dataset, target), thresholds_(thresholds)
{
    thresholds_.validate();
    double need = thresholds_.min_coverage * static_cast<double>(index_.target_size());
    min_covered_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(need - 1e-9)));
    precision_millionths_ = std::llround(thresholds_.min_precision * 1e6);
}

bool RuleGenerator::passes(std::int64_t covered, std::int64_t correct) const
{
    return covered >= min_covered_ && correct * 1000000 >= precision_millionths_ * covered;
}

namespace {
    struct Option {
        const CaseSet * cases;
        Clause clause;
    };

    std::vector<std::vector<Option>> options_for(const CaseIndex & index, std::span<const int> attributes)
    {
        std::vector<std::vector<Option>> out;
        for (int a : attributes) {
            std::vector<Option> opts;
            for (Code v : index.observed(a)) {
                opts.push_back({&index.value_cases(a, v), Clause::eq(a, v)});
                opts.push_back({&index.value_complement(a, v), Clause::neq(a, v)});
            }
            out.push_back(std::move(opts));
        }
        return out;
    }

    // Depth-first walk over one option per attribute. `visit` sees every
    // surviving full conjunction; `keep` decides whether a partial one is worth extending.
    template <typename Keep, typename Visit>
    bool walk(const std::vector<std::vector<Option>> & options, std::vector<CaseSet> & levels,
        std::vector<const Option *> & chosen, std::size_t depth, const CaseSet & target, Keep && keep,
        Visit && visit, std::uint64_t & nodes)
    {
        for (auto & opt : options[depth]) {
            ++nodes;
            CaseSet::intersect_into(levels[depth + 1], levels[depth], *opt.cases);
            auto covered = static_cast<std::int64_t>(levels[depth + 1].count());
            auto correct = static_cast<std::int64_t>(CaseSet::intersect_count(levels[depth + 1], target));
            if (! keep(covered, correct))
                continue;
            chosen[depth] = &opt;
            if (depth + 1 == options.size()) {
                if (visit(covered, correct, chosen))
                    return true;
            }
            else if (walk(options, levels, chosen, depth + 1, target, keep, visit, nodes))
                return true;
        }
        return false;
    }
}

std::vector<Rule> RuleGenerator::rules_for_subset(std::span<const int> attributes, std::uint64_t * nodes) const
{
    std::vector<Rule> out;
    if (attributes.empty() || index_.target_size() == 0)
        return out;
    auto options = options_for(index_, attributes);
    std::vector<CaseSet> levels(attributes.size() + 1, CaseSet(index_.dataset().size()));
    levels[0] = CaseSet(index_.dataset().size(), true);
    std::vector<const Option *> chosen(attributes.size());
    // A full conjunction needs correct >= p * covered >= p * min_covered, and both counts only shrink.
    auto keep = [&](std::int64_t covered, std::int64_t correct) {
        return covered >= min_covered_ && correct * 1000000 >= precision_millionths_ * min_covered_;
    };
    auto visit = [&](std::int64_t covered, std::int64_t correct, const std::vector<const Option *> & picks) {
        if (passes(covered, correct)) {
            std::vector<Clause> clauses;
            for (auto * p : picks)
                clauses.push_back(p->clause);
            out.emplace_back(std::move(clauses), index_.target());
        }
        return false;
    };
    std::uint64_t local = 0;
    walk(options, levels, chosen, 0, index_.target_cases(), keep, visit, local);
    if (nodes)
        *nodes += local;
    return out;
}

namespace {
    // Whether some conjunction over exactly these attributes is error-free and covers a
    // target case. Adding an attribute can always keep such a case (take its value), so
    // this predicate is monotone and its failures are safe to propagate downwards.
    bool has_pure_conjunction(const CaseIndex & index, std::span<const int> attributes, std::uint64_t & nodes)
    {
        auto options = options_for(index, attributes);
        std::vector<CaseSet> levels(attributes.size() + 1, CaseSet(index.dataset().size()));
        levels[0] = CaseSet(index.dataset().size(), true);
        std::vector<const Option *> chosen(attributes.size());
        auto keep = [](std::int64_t, std::int64_t correct) { return correct > 0; };
        auto visit = [](std::int64_t covered, std::int64_t correct, const auto &) { return covered == correct; };
        return walk(options, levels, chosen, 0, index.target_cases(), keep, visit, nodes);
    }
}

double enumeration_estimate(const AttributeGroup & group, const Dataset & dataset)
{
    double total = 1;
    for (int a : group)
        total *= 1 + 2 * static_cast<double>(dataset.attribute(a).codebook.size());
    return total - 1;
}

GroupRules RuleGenerator::generate(const AttributeGroup & group, const GenerationOptions & options) const
{
    if (group.empty())
        throw ValidationError("empty attribute group");
    if (static_cast<int>(group.size()) > options.max_group_size)
        throw ValidationError("group of " + std::to_string(group.size()) + " attributes would enumerate about "
            + std::to_string(static_cast<long long>(enumeration_estimate(group, index_.dataset())))
            + " conjunctions; the limit is " + std::to_string(options.max_group_size) + " attributes per group");
    for (int a : group)
        (void)index_.dataset().attribute(a);

    GroupRules out;
    int n = static_cast<int>(group.size());
    std::uint32_t full = (1u << n) - 1;
    out.stats.subsets = full;
    if (index_.target_size() == 0)
        return out;

    auto members = [&](std::uint32_t mask) {
        std::vector<int> attrs;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i))
                attrs.push_back(group[i]);
        return attrs;
    };

    std::vector<std::optional<std::vector<Rule>>> cache(full + 1);
    auto rules_of = [&](std::uint32_t mask) -> const std::vector<Rule> & {
        if (! cache[mask]) {
            cache[mask] = rules_for_subset(members(mask), &out.stats.nodes);
            ++out.stats.enumerated;
        }
        return *cache[mask];
    };

    std::vector<bool> worth(full + 1, true);
    bool search = options.prune && precision_millionths_ >= 1000000;
    if (search) {
        auto chains = build_chains(n);
        auto result = monotone_search(
            chains,
            [&](const BitVector & v) {
                auto attrs = members(v.mask);
                return has_pure_conjunction(index_, attrs, out.stats.nodes);
            },
            options.policy);
        out.stats.queried = result.query_count();
        out.stats.inferred = result.inferred;
        out.trace = dump_trace(result);
        for (std::uint32_t m = 1; m <= full; ++m)
            worth[m] = result.success(m);
    }

    std::vector<Rule> collected;
    for (std::uint32_t m = 1; m <= full; ++m) {
        if (! worth[m])
            continue;
        auto & rules = rules_of(m);
        if (! rules.empty())
            ++out.stats.successful;
        collected.insert(collected.end(), rules.begin(), rules.end());
    }

    for (auto & r : merge_rules(std::move(collected))) {
        auto m = index_.metrics(r);
        if (passes(m.covered(), m.correct))
            out.rules.push_back({std::move(r), m, -1});
    }
    return out;
}

GroupRules generate_rules_for_group(const AttributeGroup & group, const Dataset & dataset, ClassId target,
    const Thresholds & thresholds, const GenerationOptions & options)
{
    return RuleGenerator(dataset, target, thresholds).generate(group, options);
}

}
