#pragma once

#include <srg/miner.hpp>

#include <json.hpp>

#include <cstdint>
#include <vector>

namespace srg {

struct FoldReport {
    std::size_t correct = 0;
    std::size_t misclassified = 0;
    std::size_t total_classified = 0;
    std::size_t validation_cases = 0;
    std::size_t target_validation_cases = 0;
    std::size_t training_cases = 0;
    // Selected rule count per class id (index 0 unused); only the target is mined.
    std::vector<std::size_t> rules_per_class;
    std::vector<Rule> rules;
};

struct CVReport {
    int k = 10;
    bool stratified = true;
    std::uint64_t seed = 1;
    ClassId target = 1;
    std::vector<FoldReport> folds;

    std::size_t total_misclassified() const;
};

// Fold membership per case (0..k-1). Stratified: each class is shuffled and the
// concatenation is dealt round robin.
std::vector<int> assign_folds(const Dataset & dataset, int k, std::uint64_t seed, bool stratified = true);

CVReport kfold_cv(const Dataset & dataset, int k, const MinerConfig & config, std::uint64_t seed,
    bool stratified = true);

nlohmann::json cv_to_json(const CVReport & report);
std::string cv_text(const CVReport & report);

}
