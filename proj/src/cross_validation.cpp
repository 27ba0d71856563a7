#include <srg/cross_validation.hpp>
#include <srg/errors.hpp>

#include <random>
#include <sstream>

namespace srg {

std::size_t CVReport::total_misclassified() const
{
    std::size_t n = 0;
    for (auto & f : folds)
        n += f.misclassified;
    return n;
}

std::vector<int> assign_folds(const Dataset & dataset, int k, std::uint64_t seed, bool stratified)
{
    if (k < 2)
        throw ValidationError("k must be at least 2");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order;
    if (stratified) {
        for (ClassId c = 1; c <= static_cast<ClassId>(dataset.class_schema().codebook.size()); ++c) {
            std::vector<std::size_t> rows;
            for (std::size_t r = 0; r < dataset.size(); ++r)
                if (dataset.label(r) == c)
                    rows.push_back(r);
            portable_shuffle(rows, rng);
            order.insert(order.end(), rows.begin(), rows.end());
        }
    }
    else {
        for (std::size_t r = 0; r < dataset.size(); ++r)
            order.push_back(r);
        portable_shuffle(order, rng);
    }
    std::vector<int> fold(dataset.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        fold[order[i]] = static_cast<int>(i % k);
    return fold;
}

CVReport kfold_cv(const Dataset & dataset, int k, const MinerConfig & config, std::uint64_t seed, bool stratified)
{
    auto fold = assign_folds(dataset, k, seed, stratified);
    CVReport report;
    report.k = k;
    report.stratified = stratified;
    report.seed = seed;
    report.target = config.target;
    for (int f = 0; f < k; ++f) {
        std::vector<std::size_t> train, test;
        for (std::size_t r = 0; r < dataset.size(); ++r)
            (fold[r] == f ? test : train).push_back(r);
        auto training = dataset.subset(train);
        auto validation = dataset.subset(test);
        auto result = run_miner(training, config);

        FoldReport fr;
        fr.training_cases = train.size();
        fr.validation_cases = test.size();
        fr.rules_per_class.assign(dataset.class_schema().codebook.size() + 1, 0);
        fr.rules_per_class[config.target] = result.selected.size();
        fr.rules = result.rules();
        auto s = summarize(result.predictors, result.selected.size(), validation, config.target);
        fr.correct = s.cases_correct;
        fr.misclassified = s.misclassified;
        fr.total_classified = s.cases_covered;
        fr.target_validation_cases = s.target_cases;
        report.folds.push_back(std::move(fr));
    }
    return report;
}

nlohmann::json cv_to_json(const CVReport & report)
{
    nlohmann::json j;
    j["k"] = report.k;
    j["stratified"] = report.stratified;
    j["seed"] = report.seed;
    j["target_class"] = report.target;
    j["folds"] = nlohmann::json::array();
    for (auto & f : report.folds) {
        nlohmann::json rules = nlohmann::json::array();
        for (auto & r : f.rules)
            rules.push_back(r.text());
        j["folds"].push_back({
            {"correct", f.correct},
            {"misclassified", f.misclassified},
            {"total_classified", f.total_classified},
            {"validation_cases", f.validation_cases},
            {"target_validation_cases", f.target_validation_cases},
            {"rules_per_class", f.rules_per_class},
            {"rules", rules},
        });
    }
    j["total_misclassified"] = report.total_misclassified();
    return j;
}

std::string cv_text(const CVReport & report)
{
    std::ostringstream os;
    auto row = [&](const char * label, auto get) {
        os << label;
        for (auto & f : report.folds)
            os << '\t' << get(f);
        os << '\n';
    };
    os << "Fold";
    for (std::size_t i = 0; i < report.folds.size(); ++i)
        os << "\tTest " << i + 1;
    os << '\n';
    row("Correctly predicted", [](const FoldReport & f) { return f.correct; });
    row("Misclassified", [](const FoldReport & f) { return f.misclassified; });
    row("Total classified", [](const FoldReport & f) { return f.total_classified; });
    row("Validation cases", [](const FoldReport & f) { return f.validation_cases; });
    for (std::size_t c = 1; ! report.folds.empty() && c < report.folds[0].rules_per_class.size(); ++c) {
        auto label = "Rules for class C" + std::to_string(c);
        row(label.c_str(), [c](const FoldReport & f) { return f.rules_per_class[c]; });
    }
    auto label = "C" + std::to_string(report.target) + " validation cases";
    row(label.c_str(), [](const FoldReport & f) { return f.target_validation_cases; });
    return os.str();
}

}
