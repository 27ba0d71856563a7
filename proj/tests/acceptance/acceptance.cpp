// Acceptance run: one PASS/FAIL line per criterion. Exit status is non-zero
// when any criterion fails.

#include "oracles.hpp"
#include "support.hpp"

#include <srg/blocks.hpp>
#include <srg/cross_validation.hpp>
#include <srg/hansel.hpp>
#include <srg/miner.hpp>
#include <srg/plot.hpp>
#include <srg/rule_analysis.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>

using namespace srg;
using test_support::mushroom;

namespace {

// Tolerances on reported percentages; every count is compared exactly.
constexpr double pct_tolerance = 0.01;

struct Outcome {
    bool pass = true;
    std::ostringstream notes;

    void expect(bool ok, const std::string & what)
    {
        if (! ok) {
            pass = false;
            notes << " [missed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const std::string & title, const std::function<void(Outcome &)> & body)
{
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    }
    catch (const std::exception & e) {
        o.pass = false;
        o.notes << " [exception: " << e.what() << "]";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (! o.pass)
        ++failures;
    std::printf("%s %2d %s:%s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.notes.str().c_str(), secs);
    std::fflush(stdout);
}

bool near(double got, double want) { return std::abs(got - want) <= pct_tolerance + 1e-12; }

double pct(const Ratio & r) { return rounded_percent(r); }

Rule R(const std::string & text) { return parse_rule_text(text); }

const std::string odor_text = "[(x5=3) v (x5=4) v (x5=5) v (x5=6) v (x5=8) v (x5=9)] => C1";

// Exactly one 6-value subset of odor must give a pure rule over all 3796 poisonous cases
// it covers; otherwise the codebook disagrees with the documented order.
bool codebook_oracle()
{
    auto & ds = mushroom();
    int hits = 0;
    std::vector<Code> found;
    for (std::uint32_t m = 0; m < (1u << 9); ++m) {
        if (std::popcount(m) != 6)
            continue;
        std::vector<Code> values;
        for (int v = 0; v < 9; ++v)
            if (m & (1u << v))
                values.push_back(static_cast<Code>(v + 1));
        std::int64_t correct = 0, wrong = 0;
        for (std::size_t r = 0; r < ds.size(); ++r)
            if (std::find(values.begin(), values.end(), ds.at(r, 5)) != values.end())
                (ds.label(r) == 1 ? correct : wrong)++;
        if (wrong == 0 && correct == 3796) {
            ++hits;
            found = values;
        }
    }
    std::printf("codebook oracle: %d matching odor subset(s)", hits);
    if (hits == 1) {
        std::printf(" {");
        for (std::size_t i = 0; i < found.size(); ++i)
            std::printf("%s%s", i ? "," : "", mushroom().attribute(5).codebook.raw(found[i]).c_str());
        std::printf("}");
    }
    std::printf("\n");
    return hits == 1 && found == std::vector<Code>{3, 4, 5, 6, 8, 9};
}

std::vector<AttributeGroup> sequential_groups()
{
    return {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}, {10, 11, 12}, {13, 14, 15}, {16, 17, 18}, {19, 20, 21, 22}};
}

std::vector<Rule> reference_rules()
{
    return {
        R(odor_text),
        R("[(x9=6) v (x9=3)] => C1"),
        R("[(x19=2) & (x20=8) & (x21!=2) & (x22!=2)] => C1"),
        R("[(x15=3) v (x15=2) v (x15=9)] => C1"),
        R("[(x19!=2) & (x20!=6) & (x21=5) & (x22=1)] => C1"),
        R("[(x19=6) & (x20=5) & (x21!=1) & (x22!=6)] => C1"),
        R("[(x20=8) & (x21=2) & (x22!=6)] => C1"),
    };
}

void metrics_example(Outcome & o)
{
    RuleMetrics m{100, 80, 10};
    o.notes << " recall " << m.recall() << ", precision " << m.precision() << ", coverage " << m.coverage();
    o.expect(m.recall() == Ratio(4, 5), "recall 4/5");
    o.expect(m.precision() == Ratio(8, 9), "precision 8/9");
    o.expect(m.coverage() == Ratio(9, 10), "coverage 9/10");
}

void full_precision_sets(Outcome & o)
{
    Thresholds t{1.0, 0.005};
    for (auto [name, algo] : {std::pair{"srg0", &srg0}, std::pair{"srg1", &srg1}}) {
        auto r = (*algo)(mushroom(), sequential_groups(), t, 1, {});
        auto & s = r.summary;
        auto top = r.selected.empty() ? RuleMetrics{} : r.selected.front().scored.metrics;
        o.notes << " " << name << ": " << r.selected.size() << " rules, precision " << percent_string(s.actual_precision())
                << "%, coverage " << percent_string(s.actual_coverage()) << "%, top rule " << top.covered() << " ("
                << percent_string(top.coverage()) << "%);";
        o.expect(s.actual_precision() == Ratio(1, 1), std::string(name) + " precision 100");
        o.expect(s.cases_correct == 3916, std::string(name) + " coverage 100");
        o.expect(top.covered() == 3796 && top.incorrect == 0, std::string(name) + " top rule 3796");
        o.expect(near(pct(top.coverage()), 96.94), std::string(name) + " top coverage 96.94");
        o.expect(r.selected.size() <= 8, std::string(name) + " at most 8 rules");
    }
}

void reference_overlaps(Outcome & o)
{
    auto rules = reference_rules();
    auto & ds = mushroom();
    auto o12 = overlap(rules[0], rules[1], ds, 1);
    auto o16 = overlap(rules[0], rules[5], ds, 1);
    auto o23 = overlap(rules[1], rules[2], ds, 1);
    o.notes << " R1/R2 union " << o12.union_cases << " overlap " << o12.overlap_cases << " (" << percent_string(o12.overlap_pct())
            << "%); R1/R6 overlap " << o16.overlap_cases << " added " << o16.added_cases << "; R2/R3 union " << o23.union_cases
            << " overlap " << o23.overlap_cases;
    o.expect(o12.union_cases == 3820 && o12.overlap_cases == 1728, "R1/R2 3820/1728");
    o.expect(near(pct(o12.overlap_pct()), 45.24), "R1/R2 45.24%");
    o.expect(o16.overlap_cases == 0 && o16.added_cases == 72, "R1/R6 0/72");
    o.expect(o23.union_cases == 1784 && o23.overlap_cases == 1152, "R2/R3 1784/1152");
}

void srg2_repair(Outcome & o)
{
    auto & ds = mushroom();
    auto r = srg2(ds, {{9, 5, 7, 11}, {13, 14, 15, 6}, {1, 2, 4, 21, 22}}, {0.95, 0.005});
    auto target = class_cases(ds, 1);
    CaseSet wrong(ds.size());
    for (auto & s : r.selected)
        wrong |= cases(s.scored.rule, ds) - target;
    std::size_t imprecise = 0;
    bool attributable = false;
    for (auto & s : r.selected)
        if (s.scored.metrics.incorrect > 0) {
            ++imprecise;
            auto own = cases(s.scored.rule, ds) - target;
            attributable = own == wrong && percent_string(s.scored.metrics.precision()) == "95.02";
        }
    std::vector<std::size_t> comp_cover;
    for (auto & c : r.complementary)
        comp_cover.push_back(cases(c.scored.rule, ds).count());
    std::size_t comp_overlap = r.complementary.size() == 2
        ? CaseSet::intersect_count(cases(r.complementary[0].scored.rule, ds), cases(r.complementary[1].scored.rule, ds))
        : 0;

    auto & s = r.summary;
    o.notes << " " << r.selected.size() << " rules; " << r.misclassified_before_repair << " misclassified before repair"
            << (attributable && imprecise == 1 ? ", all from the 95.02% rule" : "") << "; " << r.complementary.size()
            << " complementary rule(s) covering";
    for (auto c : comp_cover)
        o.notes << " " << c;
    o.notes << "; after repair " << s.misclassified << " misclassified, " << s.unclassified_target << " unclassified, coverage "
            << percent_string(s.actual_coverage()) << "%";

    o.expect(r.selected.size() == 13, "13 rules");
    o.expect(r.misclassified_before_repair == 192, "192 misclassified");
    o.expect(imprecise == 1 && attributable, "errors all from the 95.02% rule");
    o.expect(comp_cover == std::vector<std::size_t>{336, 336} && comp_overlap == 0, "two complementary rules of 336 with no overlap");
    o.expect(s.misclassified == 0, "0 misclassified after repair");
    o.expect(s.unclassified_target == 4, "4 unclassified");
    o.expect(near(pct(s.actual_coverage()), 99.89), "coverage 99.89");

    // The two-clause repair rules (x5=1 or 2) & (x9!=1), for the record.
    auto r14 = R("[(x5=1) & (x9!=1)] => C2"), r15 = R("[(x5=2) & (x9!=1)] => C2");
    auto c14 = cases(r14, ds), c15 = cases(r15, ds);
    bool cover_all = ((c14 | c15) & wrong) == wrong;
    o.notes << "; repair rules (x5=1)&(x9!=1), (x5=2)&(x9!=1) cover " << c14.count() << "/" << c15.count() << " with overlap "
            << CaseSet::intersect_count(c14, c15) << (cover_all ? " and contain all misclassified cases" : "");
}

void set_complexity(Outcome & o)
{
    auto & ds = mushroom();
    std::vector<Rule> a10 = {R(odor_text), R("[(x20=5)] => C1"), R("[(x12=3) & (x21=5)] => C1"), R("[(x8!=1) & (x21=2)] => C1")};
    auto ours = complexity(a10, ds, Counting::independent);
    // CR3 is one disjunction of three conjunctions: its six clauses count once and
    // its coverage is that of the union.
    std::vector<Rule> cr3 = {R("[(x8=2) & (x12=3)] => C1"), R("[(x8=2) & (x12=2)] => C1"), R("[(x8=2) & (x21=2)] => C1")};
    CaseSet cr3_cases(ds.size());
    std::int64_t cr3_clauses = 0;
    for (auto & r : cr3) {
        cr3_cases |= cases(r, ds);
        cr3_clauses += r.base_clause_count();
    }
    std::vector<Rule> cr12 = {R(odor_text), R("[(x20=5)] => C1")};
    auto head = complexity(cr12, ds, Counting::independent);
    Complexity cr{head.clauses + cr3_clauses, head.covered + static_cast<std::int64_t>(cr3_cases.count())};
    char a[32], b[32];
    std::snprintf(a, sizeof a, "%.4f", ours.value().value());
    std::snprintf(b, sizeof b, "%.4f", cr.value().value());
    o.notes << " R1-R4 " << ours.clauses << "/" << ours.covered << " = " << a << "; CR1-CR3 " << cr.clauses << "/" << cr.covered
            << " = " << b;
    o.expect(ours.clauses == 11 && ours.covered == 5428, "11/5428");
    o.expect(cr.clauses == 13 && cr.covered == 4780, "13/4780");
    o.expect(std::string(a) == "0.0020" && std::string(b) == "0.0027", "0.0020 vs 0.0027");
}

void cross_validation(Outcome & o)
{
    MinerConfig c;
    c.algorithm = Algorithm::srg2;
    c.grouping = parse_grouping("sequential:3");
    c.thresholds = {0.95, 0.005};
    auto cv = kfold_cv(mushroom(), 10, c, 1);
    o.notes << " misclassified per fold:";
    bool zero = true, sizes = true;
    for (auto & f : cv.folds) {
        o.notes << " " << f.misclassified;
        zero = zero && f.misclassified == 0;
        sizes = sizes && (f.validation_cases == 812 || f.validation_cases == 813);
    }
    o.notes << "; validation sizes:";
    for (auto & f : cv.folds)
        o.notes << " " << f.validation_cases;
    o.expect(cv.folds.size() == 10, "10 folds");
    o.expect(zero, "0 misclassified in every fold");
    o.expect(sizes, "812/813 validation cases");
}

void chains(Outcome & o)
{
    for (int n = 1; n <= 12; ++n) {
        auto cs = build_chains(n);
        std::uint64_t binom = 1;
        for (int i = 1; i <= n / 2; ++i)
            binom = binom * static_cast<std::uint64_t>(n - n / 2 + i) / static_cast<std::uint64_t>(i);
        std::vector<int> seen(1u << n, 0);
        bool saturated = true;
        for (auto & c : cs)
            for (std::size_t i = 0; i < c.size(); ++i) {
                ++seen[c[i].mask];
                if (i)
                    saturated = saturated && c[i - 1].leq(c[i]) && c[i].count() == c[i - 1].count() + 1;
            }
        bool partition = std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
        o.expect(partition, "partition n=" + std::to_string(n));
        o.expect(saturated, "saturation n=" + std::to_string(n));
        o.expect(cs.size() == binom, "chain count n=" + std::to_string(n));
    }
    auto three = build_chains(3);
    std::multiset<std::size_t> sizes;
    for (auto & c : three)
        sizes.insert(c.size());
    auto listing = dump_chains(three);
    listing.pop_back();
    std::replace(listing.begin(), listing.end(), '\n', ';');
    o.notes << " n=1..12 checked; n=3: " << listing;
    o.expect(sizes == std::multiset<std::size_t>{2, 2, 4}, "n=3 sizes {2,2,4}");
    o.expect(dump_chains(three) == "chain 1: 010 110\nchain 2: 100 101\nchain 3: 000 001 011 111\n", "n=3 listing");
}

void monotone(Outcome & o)
{
    std::mt19937_64 rng(8);
    std::size_t functions = 0;
    for (int n = 3; n <= 10; ++n) {
        auto cs = build_chains(n);
        std::uint32_t cube = 1u << n;
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<std::uint32_t> minimal;
            int k = 1 + static_cast<int>(rng() % 4);
            for (int i = 0; i < k; ++i)
                if (auto m = static_cast<std::uint32_t>(rng()) & (cube - 1))
                    minimal.push_back(m);
            auto f = [&](std::uint32_t v) {
                return std::any_of(minimal.begin(), minimal.end(), [&](std::uint32_t m) { return (m & ~v) == 0; });
            };
            auto res = monotone_search(cs, [&](const BitVector & v) { return f(v.mask); });
            bool exact = true, constant = true;
            for (std::uint32_t m = 0; m < cube; ++m)
                exact = exact && res.success(m) == f(m);
            for (std::uint32_t m = 1; m < cube; ++m)
                constant = constant && f(m) == f(1);
            o.expect(exact, "labels n=" + std::to_string(n));
            if (! constant)
                o.expect(res.query_count() < cube, "query count n=" + std::to_string(n));
            ++functions;
        }
    }
    auto example = monotone_search(build_chains(3), [](const BitVector & v) {
        return parse_bits("110").leq(v) || parse_bits("101").leq(v);
    });
    std::string seq;
    for (auto & q : example.trace)
        seq += (seq.empty() ? "" : ",") + ("(" + q.vector.str() + ")");
    o.notes << " " << functions << " functions labelled; three-attribute example queries " << seq;
    o.expect(seq == "(010),(110),(100),(101),(001),(011)", "example query order");
    o.expect(example.success(parse_bits("111").mask), "(111) inferred success");
}

void pruning(Outcome & o)
{
    std::mt19937_64 rng(91);
    std::size_t groups = 0, rules = 0;
    for (int trial = 0; trial < 12; ++trial) {
        auto ds = test_support::sample(mushroom(), 500, 500 + static_cast<std::uint64_t>(trial));
        std::vector<int> attrs(22);
        for (int i = 0; i < 22; ++i)
            attrs[i] = i + 1;
        std::shuffle(attrs.begin(), attrs.end(), rng);
        AttributeGroup group(attrs.begin(), attrs.begin() + 1 + trial % 4);
        for (double p : {1.0, 0.95, 0.75}) {
            auto expected = test_support::enumerate_all(ds, group, 1, p, 0.005);
            auto got = generate_rules_for_group(group, ds, 1, {p, 0.005}).rules;
            auto by_rule = [](auto & x, auto & y) { return x.rule < y.rule; };
            std::sort(expected.begin(), expected.end(), by_rule);
            std::sort(got.begin(), got.end(), by_rule);
            o.expect(got == expected, "group of " + std::to_string(group.size()) + " at precision " + std::to_string(p));
            ++groups;
            rules += got.size();
        }
    }
    o.notes << " " << groups << " group runs, " << rules << " rules compared";
}

void visualization(Outcome & o)
{
    auto & ds = mushroom();
    auto odor = reference_blocks(ds, 5);
    std::size_t pure_poison = 0;
    for (auto & b : odor)
        pure_poison += b.dominant == 1 && b.purity() == Ratio(1, 1);
    o.notes << " odor: " << odor.size() << " blocks, " << pure_poison << " of purity 1.00 on the poisonous side";
    o.expect(pure_poison == 6, "six pure poisonous odor blocks");

    std::regex form(R"(X\d+, block, \d+ has a (purity|total frequency) of \d+|X\d+ has a small frequency block\.)");
    auto lines = linguistic_description(ds);
    bool formatted = ! lines.empty();
    for (auto & l : lines)
        formatted = formatted && std::regex_match(l, form);
    o.expect(formatted, "description line format");

    // Six identical columns; value 2 holds 100 cases of which 81 are of class 1.
    std::vector<AttributeSchema> attrs;
    for (int a = 1; a <= 6; ++a)
        attrs.push_back({"a" + std::to_string(a), a, MeasurementKind::nominal, Codebook({"u", "v"}), {}});
    std::vector<Code> cells;
    std::vector<ClassId> labels;
    for (int i = 0; i < 200; ++i) {
        for (int a = 0; a < 6; ++a)
            cells.push_back(i < 100 ? 1 : 2);
        labels.push_back(i < 100 ? (i % 2 ? 1 : 2) : (i - 100 < 81 ? 1 : 2));
    }
    Dataset toy(attrs, {"class", 0, Codebook({"p", "q"})}, cells, labels);
    auto toy_lines = linguistic_description(toy);
    bool fig = std::find(toy_lines.begin(), toy_lines.end(), "X6, block, 2 has a purity of 81") != toy_lines.end();
    o.notes << "; " << lines.size() << " mushroom description lines";
    o.expect(fig, "line 'X6, block, 2 has a purity of 81'");

    auto layout = default_layout(ds, {}, 0.8);
    bool involution = true;
    for (int a = 1; a <= 22; ++a)
        involution = involution && flip_attribute(flip_attribute(layout, a), a) == layout;
    o.expect(involution, "flip involution");

    auto sums_ok = [](const AxisLayout & l) {
        for (auto & [a, axis] : l.axes) {
            std::size_t n = 0;
            for (auto & b : axis.blocks)
                n += b.frequency;
            if (n != 8124)
                return false;
        }
        return true;
    };
    std::vector<AxisLayout> variants = {layout, flip_attribute(layout, 5), relocate_small_blocks(layout, 0.2),
        sort_blocks_by_class(layout, 1), sort_blocks_by_class(layout, 2, false),
        reorder(layout, order_attributes_by_purity(layout, 0.8)), default_layout(ds, {0.05, 0.9}, 0.8)};
    bool sums = std::all_of(variants.begin(), variants.end(), sums_ok);
    o.expect(sums, "axis totals 8124 under transforms");
}

void round_trip(Outcome & o)
{
    auto check = [&](const Dataset & ds, const std::string & name) {
        std::map<std::tuple<int, Code, ClassId>, std::size_t> expected;
        for (std::size_t r = 0; r < ds.size(); ++r)
            for (int a = 1; a <= ds.width(); ++a)
                expected[{a, ds.at(r, a), ds.label(r)}]++;
        std::vector<std::vector<Block>> axes, merged;
        for (int a = 1; a <= ds.width(); ++a) {
            axes.push_back(reference_blocks(ds, a));
            merged.push_back(reference_blocks(ds, a, {}, {0.1, 0.6}));
        }
        o.expect(triples_from_blocks(axes) == expected, name + " plain blocks");
        o.expect(triples_from_blocks(merged) == expected, name + " merged blocks");
        o.notes << " " << name << ": " << expected.size() << " distinct triples;";
    };
    check(mushroom(), "mushroom");
    check(test_support::random_dataset(1000, 1000, 8, 6, 3), "random 1000x8");
}

}

int main()
{
    bool codebook = codebook_oracle();
    if (! codebook) {
        std::printf("FAIL  0 codebook oracle: table criteria not asserted\n");
        return 1;
    }
    criterion(1, "metrics worked example", metrics_example);
    criterion(2, "full-precision rule sets on sequential groups", full_precision_sets);
    criterion(3, "overlap of reference rules", reference_overlaps);
    criterion(4, "srg2 with complementary repair on expert groups", srg2_repair);
    criterion(5, "rule set complexity", set_complexity);
    criterion(6, "10-fold cross validation at 95%", cross_validation);
    criterion(7, "Hansel chains", chains);
    criterion(8, "monotone search soundness", monotone);
    criterion(9, "pruned generation equals brute force", pruning);
    criterion(10, "block visualization", visualization);
    criterion(11, "lossless block round trip", round_trip);
    std::printf("SKIP 12 interactive UI loop: needs the web client\n");
    std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
