#pragma once

#include <srg/case_set.hpp>
#include <srg/dataset.hpp>
#include <srg/ratio.hpp>
#include <srg/rule.hpp>

#include <json.hpp>

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace srg {

enum class MetricScope { target_class, two_class };

struct RuleMetrics {
    std::int64_t n = 0;
    std::int64_t correct = 0;
    std::int64_t incorrect = 0;

    std::int64_t covered() const { return correct + incorrect; }
    Ratio recall() const { return {correct, n}; }
    Ratio precision() const { return {correct, covered()}; }
    Ratio coverage() const { return {covered(), n}; }

    friend bool operator==(const RuleMetrics &, const RuleMetrics &) = default;
};

nlohmann::json metrics_to_json(const RuleMetrics & m);

// Rows matching a rule, and rows of a class.
CaseSet cases(const Rule & rule, const Dataset & dataset);
CaseSet cases(const CombinedRule & rule, const Dataset & dataset);
CaseSet class_cases(const Dataset & dataset, ClassId cls);

// Target-class scope: N is the size of the rule's class. Two-class scope
// treats the rule and its reversal as a classifier over every case.
RuleMetrics metrics(const Rule & rule, const Dataset & dataset, MetricScope scope = MetricScope::target_class);
RuleMetrics metrics(const CombinedRule & rule, const Dataset & dataset, MetricScope scope = MetricScope::target_class);

enum class Counting { independent, distinct };

struct Complexity {
    std::int64_t clauses = 0;
    std::int64_t covered = 0;
    Ratio value() const { return {clauses, covered}; }
};

// Throws NumericError when the rules cover nothing.
Complexity complexity(std::span<const Rule> rules, const Dataset & dataset, Counting counting);

struct OverlapReport {
    std::int64_t union_cases = 0;
    std::int64_t overlap_cases = 0;
    std::int64_t added_cases = 0;
    // Class cases outside the first rule; the base of added_pct.
    std::int64_t uncovered_by_first = 0;

    Ratio overlap_pct() const { return {overlap_cases, union_cases}; }
    Ratio added_pct() const { return {added_cases, uncovered_by_first}; }
};

// Counts over the correctly covered cases of `cls`.
OverlapReport overlap(const Rule & r1, const Rule & r2, const Dataset & dataset, ClassId cls);

CombinedRule reverse_rule(const Rule & rule, ClassId other_class);
CombinedRule reverse_rule(const CombinedRule & rule, ClassId other_class);

// Repeatedly merges rules that agree everywhere except on one include clause
// of the same attribute. Output is sorted and duplicate-free.
std::vector<Rule> merge_rules(std::vector<Rule> rules);

CombinedRule combine(const Rule & base, std::vector<Rule> complementary);

struct Prediction {
    enum class Status { classified, unclassified, conflict };
    Status status = Status::unclassified;
    std::optional<ClassId> cls;
    int votes = 0;
    std::map<ClassId, int> votes_by_class;
};

Prediction predict(std::span<const CombinedRule> rules, std::span<const Code> row);
Prediction predict(std::span<const Rule> rules, std::span<const Code> row);

}
