#pragma once

#include <srg/case_set.hpp>
#include <srg/dataset.hpp>
#include <srg/grouping.hpp>
#include <srg/hansel.hpp>
#include <srg/rule.hpp>
#include <srg/rule_analysis.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace srg {

struct Thresholds {
    double min_precision = 1.0;
    // Fraction of the target class a rule must cover.
    double min_coverage = 0.005;

    void validate() const;
};

struct ScoredRule {
    Rule rule;
    RuleMetrics metrics;
    // Position of the source group in the run's group list; -1 when not from a group.
    int group = -1;

    friend bool operator==(const ScoredRule &, const ScoredRule &) = default;
};

struct GenerationOptions {
    TraversalPolicy policy;
    int max_group_size = 6;
    // Use the monotone subset search when it is sound (precision threshold 1.0).
    bool prune = true;
};

struct GroupStats {
    std::size_t subsets = 0;
    std::size_t queried = 0;
    std::size_t inferred = 0;
    std::size_t enumerated = 0;
    std::size_t successful = 0;
    std::uint64_t nodes = 0;
};

struct GroupRules {
    std::vector<ScoredRule> rules;
    GroupStats stats;
    std::string trace;
};

// Per-(attribute, code) case sets over one dataset for one target class.
class CaseIndex {
public:
    CaseIndex(const Dataset & dataset, ClassId target);

    const Dataset & dataset() const { return *dataset_; }
    ClassId target() const { return target_; }
    const CaseSet & target_cases() const { return target_cases_; }
    std::size_t target_size() const { return target_size_; }
    const CaseSet & value_cases(int attribute, Code code) const { return eq_[attribute - 1][code]; }
    const CaseSet & value_complement(int attribute, Code code) const { return neq_[attribute - 1][code]; }
    // Codes of an attribute that occur in the data, ascending.
    const std::vector<Code> & observed(int attribute) const { return observed_[attribute - 1]; }

    CaseSet cases(const Rule & rule) const;
    RuleMetrics metrics(const Rule & rule) const;

private:
    const Dataset * dataset_;
    ClassId target_;
    CaseSet target_cases_;
    std::size_t target_size_ = 0;
    std::vector<std::vector<CaseSet>> eq_, neq_;
    std::vector<std::vector<Code>> observed_;
};

// Produces every threshold-passing conjunction over a group's attribute
// subsets, then merges include siblings.
class RuleGenerator {
public:
    RuleGenerator(const Dataset & dataset, ClassId target, Thresholds thresholds);

    GroupRules generate(const AttributeGroup & group, const GenerationOptions & options = {}) const;

    // Unmerged passing rules that use exactly `attributes`.
    std::vector<Rule> rules_for_subset(std::span<const int> attributes, std::uint64_t * nodes = nullptr) const;

    bool passes(std::int64_t covered, std::int64_t correct) const;
    std::int64_t min_covered() const { return min_covered_; }
    const CaseIndex & index() const { return index_; }

private:
    CaseIndex index_;
    Thresholds thresholds_;
    std::int64_t min_covered_ = 1;
    std::int64_t precision_millionths_ = 1000000;
};

GroupRules generate_rules_for_group(const AttributeGroup & group, const Dataset & dataset, ClassId target,
    const Thresholds & thresholds, const GenerationOptions & options = {});

// Number of conjunctions an exhaustive pass over every subset of the group visits.
double enumeration_estimate(const AttributeGroup & group, const Dataset & dataset);

}
