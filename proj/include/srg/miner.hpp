#pragma once

#include <srg/grouping.hpp>
#include <srg/rule_generation.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace srg {

enum class Algorithm { srg0, srg1, srg2, srg3, srg4, srg5 };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view text);

struct MinerConfig {
    Algorithm algorithm = Algorithm::srg1;
    GroupingStrategy grouping;
    Thresholds thresholds;
    std::uint64_t seed = 1;
    ClassId target = 1;
    // Selection used by srg3, srg4 and srg5 over their groups (srg1 or srg2).
    Algorithm base = Algorithm::srg1;
    // Groups whose rules feed most_frequent_attributes when grouping is most_frequent.
    std::optional<GroupingStrategy> prior_grouping;
    GenerationOptions generation;
};

nlohmann::json config_to_json(const MinerConfig & config);
MinerConfig config_from_json(const nlohmann::json & doc);

struct MiningSummary {
    std::size_t target_cases = 0;
    std::size_t rules_selected = 0;
    std::size_t cases_covered = 0;
    std::size_t cases_correct = 0;
    std::size_t misclassified = 0;
    std::size_t unclassified_target = 0;

    Ratio actual_precision() const { return {static_cast<std::int64_t>(cases_correct), static_cast<std::int64_t>(cases_covered)}; }
    Ratio actual_coverage() const { return {static_cast<std::int64_t>(cases_correct), static_cast<std::int64_t>(target_cases)}; }

    friend bool operator==(const MiningSummary &, const MiningSummary &) = default;
};

struct SelectedRule {
    ScoredRule scored;
    // Target cases this rule added when it was selected.
    std::size_t added = 0;
};

struct OverlapRow {
    std::size_t first = 0;
    std::size_t second = 0;
    OverlapReport report;
};

struct AttributeFrequency {
    int attribute = 0;
    Ratio share;
};

struct MiningResult {
    Algorithm algorithm = Algorithm::srg1;
    Thresholds thresholds;
    ClassId target = 1;
    std::vector<AttributeGroup> groups;
    std::size_t candidates = 0;
    std::vector<SelectedRule> selected;
    // Opposite-class rules admitted to repair imprecise selections.
    std::vector<SelectedRule> complementary;
    // What prediction applies: each selected rule minus the complementary rules that hit its errors.
    std::vector<CombinedRule> predictors;
    std::vector<OverlapRow> overlaps;
    std::vector<AttributeFrequency> attribute_frequency;
    std::size_t misclassified_before_repair = 0;
    bool precision_not_improved = false;
    MiningSummary summary;

    std::vector<Rule> rules() const;
};

// Candidate rules from each group, in group order.
std::vector<std::vector<ScoredRule>> generate_candidates(const Dataset & dataset, ClassId target,
    const std::vector<AttributeGroup> & groups, const Thresholds & thresholds, const GenerationOptions & options = {});

// Attributes used by at least `threshold` of some group's rules, by share descending.
std::vector<AttributeFrequency> most_frequent_attributes(const std::vector<std::vector<ScoredRule>> & rules_by_group,
    double threshold = 0.5);

MiningResult srg0(const Dataset & dataset, const std::vector<AttributeGroup> & groups, const Thresholds & thresholds,
    ClassId target = 1, const GenerationOptions & options = {});
MiningResult srg1(const Dataset & dataset, const std::vector<AttributeGroup> & groups, const Thresholds & thresholds,
    ClassId target = 1, const GenerationOptions & options = {});
MiningResult srg2(const Dataset & dataset, const std::vector<AttributeGroup> & groups, const Thresholds & thresholds,
    ClassId target = 1, const GenerationOptions & options = {});
// srg2 over groups rebuilt from the attributes that dominate a prior run's rules.
MiningResult srg2_from_prior(const Dataset & dataset, const std::vector<std::vector<ScoredRule>> & prior_rules,
    const Thresholds & thresholds, ClassId target, int group_size, double frequency_threshold = 0.5,
    const GenerationOptions & options = {});
MiningResult srg3(const Dataset & dataset, const GroupingStrategy & random_grouping, Algorithm base,
    const Thresholds & thresholds, ClassId target = 1, int regroup_size = 4, const GenerationOptions & options = {});
MiningResult srg4(const Dataset & dataset, const std::vector<AttributeGroup> & expert_groups, Algorithm base,
    const Thresholds & thresholds, ClassId target = 1, const GenerationOptions & options = {});
MiningResult srg5(const Dataset & dataset, const std::vector<int> & attributes, int group_size, Algorithm base,
    const Thresholds & thresholds, ClassId target = 1, const GenerationOptions & options = {});

MiningResult run_miner(const Dataset & dataset, const MinerConfig & config);

// Recounts the summary from predictors on a dataset.
MiningSummary summarize(const std::vector<CombinedRule> & predictors, std::size_t rules_selected,
    const Dataset & dataset, ClassId target);

nlohmann::json result_to_json(const MiningResult & result);
std::string text_report(const MiningResult & result);

// Pairwise overlap table for consecutive-rule comparisons and all pairs.
std::string overlap_table(const std::vector<Rule> & rules, const Dataset & dataset, ClassId cls);

// Worker cap from SRG_THREADS, else hardware concurrency.
unsigned worker_count();

}
