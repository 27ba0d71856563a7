#pragma once

#include <srg/codebook.hpp>
#include <srg/measurement.hpp>

#include <json.hpp>

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace srg {

class Dataset;

enum class Polarity { include, exclude };

// x_i in values (include) or x_i not in values (exclude). Values are kept sorted.
struct Clause {
    int attribute = 0;
    Polarity polarity = Polarity::include;
    std::vector<Code> values;

    Clause() = default;
    Clause(int attribute, Polarity polarity, std::vector<Code> values);
    static Clause eq(int attribute, Code v) { return Clause(attribute, Polarity::include, {v}); }
    static Clause neq(int attribute, Code v) { return Clause(attribute, Polarity::exclude, {v}); }
    static Clause in(int attribute, std::vector<Code> vs) { return Clause(attribute, Polarity::include, std::move(vs)); }

    bool matches(Code v) const;
    // Each value of an include set is one base clause; an exclude clause is one.
    int base_clause_count() const;

    friend auto operator<=>(const Clause &, const Clause &) = default;
    friend bool operator==(const Clause &, const Clause &) = default;
};

// Conjunction of clauses on distinct attributes. An empty clause list is the
// always-true rule.
class Rule {
public:
    Rule() = default;
    Rule(std::vector<Clause> clauses, ClassId target);

    bool matches(std::span<const Code> row) const
    {
        for (auto & c : clauses_)
            if (! c.matches(row[c.attribute - 1]))
                return false;
        return true;
    }

    const std::vector<Clause> & clauses() const { return clauses_; }
    ClassId target() const { return target_; }
    int base_clause_count() const;
    std::vector<int> attributes() const;
    const Clause * clause_for(int attribute) const;
    std::vector<RelationUse> relation_uses() const;

    std::string text() const;

    friend auto operator<=>(const Rule &, const Rule &) = default;
    friend bool operator==(const Rule &, const Rule &) = default;

private:
    std::vector<Clause> clauses_;
    ClassId target_ = 1;
};

// base AND NOT (s1 OR s2 ...), optionally negated as a whole (rule reversal).
struct CombinedRule {
    Rule base;
    std::vector<Rule> subtracted;
    bool negated = false;
    ClassId target = 1;

    CombinedRule() = default;
    explicit CombinedRule(Rule r) : base(std::move(r)), target(base.target()) {}
    CombinedRule(Rule b, std::vector<Rule> s, ClassId t, bool neg = false) :
        base(std::move(b)), subtracted(std::move(s)), negated(neg), target(t) {}

    bool matches(std::span<const Code> row) const
    {
        bool v = base.matches(row);
        if (v)
            for (auto & s : subtracted)
                if (s.matches(row)) {
                    v = false;
                    break;
                }
        return v != negated;
    }

    int base_clause_count() const;
    std::string text() const;

    friend bool operator==(const CombinedRule &, const CombinedRule &) = default;
};

// Parses the bracket notation, e.g. "[(x5=3) v (x5=4)] => C1" or
// "[(x19=2) & (x20=8) & (x21!=2)] => C1". Accepts the unicode forms of != and v.
Rule parse_rule_text(std::string_view text);

nlohmann::json rule_to_json(const Rule & rule);
Rule rule_from_json(const nlohmann::json & doc);
nlohmann::json combined_to_json(const CombinedRule & rule);

// Throws ValidationError when the rule names unknown attributes or codes, or
// uses a relation outside an attribute's whitelist.
void validate_rule(const Rule & rule, const Dataset & dataset);

}
