#include "support.hpp"

#include <srg/blocks.hpp>
#include <srg/plot.hpp>
#include <srg/rule_analysis.hpp>

#include <doctest.h>

#include <map>
#include <regex>
#include <set>

using namespace srg;
using test_support::mushroom;

namespace {
    // Single-attribute dataset with a second column used as reference.
    Dataset two_columns(const std::vector<std::pair<std::string, std::string>> & rows,
        const std::vector<std::string> & classes = {})
    {
        std::vector<std::string> a_book, b_book;
        for (auto & [a, b] : rows) {
            if (std::find(a_book.begin(), a_book.end(), a) == a_book.end())
                a_book.push_back(a);
            if (std::find(b_book.begin(), b_book.end(), b) == b_book.end())
                b_book.push_back(b);
        }
        std::sort(b_book.begin(), b_book.end());
        Codebook ca(a_book), cb(b_book), cls({"p", "q"});
        std::vector<Code> cells;
        std::vector<ClassId> labels;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            cells.push_back(ca.code(rows[i].first));
            cells.push_back(cb.code(rows[i].second));
            labels.push_back(classes.empty() ? 1 : cls.code(classes[i]));
        }
        return Dataset({{"a", 1, MeasurementKind::nominal, ca, {}}, {"b", 2, MeasurementKind::nominal, cb, {}}},
            {"class", 0, cls}, cells, labels);
    }

    std::size_t axis_total(const AxisLayout & layout, int a)
    {
        std::size_t n = 0;
        for (auto & b : layout.axes.at(a).blocks)
            n += b.frequency;
        return n;
    }

    std::multiset<std::vector<Code>> contents(const AxisLayout & layout)
    {
        std::multiset<std::vector<Code>> out;
        for (auto & [a, axis] : layout.axes)
            for (auto & b : axis.blocks) {
                auto key = b.values;
                key.insert(key.begin(), static_cast<Code>(a));
                for (auto h : b.histogram)
                    key.push_back(static_cast<Code>(h));
                out.insert(key);
            }
        return out;
    }

    std::map<std::tuple<int, Code, ClassId>, std::size_t> counted_triples(const Dataset & ds)
    {
        std::map<std::tuple<int, Code, ClassId>, std::size_t> out;
        for (std::size_t r = 0; r < ds.size(); ++r) {
            auto row = ds.row(r);
            for (std::size_t a = 0; a < row.size(); ++a)
                out[{static_cast<int>(a) + 1, row[a], ds.label(r)}]++;
        }
        return out;
    }

    double mean_position_of_class(const AxisLayout & layout, ClassId cls)
    {
        double sum = 0;
        int n = 0;
        for (auto & [a, axis] : layout.axes) {
            auto spans = place_blocks(axis);
            for (std::size_t k = 0; k < axis.blocks.size(); ++k)
                if (axis.blocks[k].dominant == cls) {
                    sum += (spans[k].y0 + spans[k].y1) / 2;
                    ++n;
                }
        }
        return n ? sum / n : 0;
    }
}

TEST_CASE("odor blocks match raw counts")
{
    std::map<std::string, std::size_t> raw;
    for (auto & row : test_support::mushroom_raw())
        raw[row[5]]++;
    auto blocks = frequency_blocks(mushroom(), 5);
    CHECK(blocks.size() == raw.size());
    std::size_t total = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        total += blocks[i].frequency;
        auto token = mushroom().attribute(5).codebook.raw(blocks[i].values.front());
        CHECK(blocks[i].frequency == raw[token]);
        if (i)
            CHECK(blocks[i].frequency <= blocks[i - 1].frequency);
    }
    CHECK(total == 8124);
}

TEST_CASE("odor against the class gives six pure poisonous blocks")
{
    auto blocks = reference_blocks(mushroom(), 5);
    std::set<Code> pure_poison;
    for (auto & b : blocks)
        if (b.purity() == Ratio(1, 1) && b.dominant == 1)
            pure_poison.insert(b.values.front());
    CHECK(pure_poison == std::set<Code>{3, 4, 5, 6, 8, 9});
}

TEST_CASE("dominant reference value and purity")
{
    std::vector<std::pair<std::string, std::string>> rows;
    for (auto [ref, n] : std::vector<std::pair<std::string, int>>{{"0", 10}, {"1", 70}, {"2", 12}, {"3", 8}})
        for (int i = 0; i < n; ++i)
            rows.push_back({"a", ref});
    auto ds = two_columns(rows);
    auto blocks = reference_blocks(ds, 1, 2);
    REQUIRE(blocks.size() == 1);
    CHECK(ds.attribute(2).codebook.raw(blocks[0].dominant) == "1");
    CHECK(blocks[0].purity() == Ratio(7, 10));
    CHECK(blocks[0].frequency == 100);
}

TEST_CASE("equal frequencies keep separate blocks")
{
    std::vector<std::pair<std::string, std::string>> rows;
    for (auto [v, n] : std::vector<std::pair<std::string, int>>{{"a", 3}, {"b", 3}, {"c", 4}})
        for (int i = 0; i < n; ++i)
            rows.push_back({v, "x"});
    auto ds = two_columns(rows);
    auto blocks = frequency_blocks(ds, 1);
    REQUIRE(blocks.size() == 3);
    CHECK(ds.attribute(1).codebook.raw(blocks[0].values.front()) == "c");
    CHECK(blocks[1].values != blocks[2].values);
    CHECK(blocks[1].frequency == 3);
    CHECK(blocks[2].frequency == 3);

    auto single = frequency_blocks(two_columns({{"z", "x"}, {"z", "x"}}), 1);
    REQUIRE(single.size() == 1);
    CHECK(single[0].frequency == 2);
    CHECK(single[0].purity() == Ratio(1, 1));
}

TEST_CASE("merging small and impure values keeps every member")
{
    auto ds = test_support::random_dataset(31, 1000, 1, 12, 3);
    BlockOptions options;
    options.small_threshold = 0.08;
    options.merge_below_purity = 0.36;
    auto blocks = reference_blocks(ds, 1, {}, options);
    std::size_t total = 0;
    std::set<Code> seen;
    for (auto & b : blocks) {
        total += b.frequency;
        for (auto v : b.values)
            CHECK(seen.insert(v).second);
        if (b.role == BlockRole::merged_small)
            CHECK(&b == &blocks.back());
    }
    CHECK(total == 1000);
    CHECK(triples_from_blocks({blocks}) == counted_triples(ds));
}

TEST_CASE("purity filter keeps blocks at or above the threshold")
{
    auto make = [](std::size_t hit, std::size_t miss) {
        Block b;
        b.attribute = 1;
        b.values = {1};
        b.histogram = {hit, miss};
        b.frequency = hit + miss;
        b.dominant = hit >= miss ? 1 : 2;
        return b;
    };
    std::vector<Block> blocks = {make(85, 15), make(79, 21), make(10, 0)};
    CHECK(purity_filter(blocks, 0.8).size() == 2);
    CHECK(purity_filter(blocks, 0.0).size() == 3);
}

TEST_CASE("linguistic description format")
{
    auto lines = linguistic_description(mushroom());
    std::regex form(R"(X\d+, block, \d+ has a (purity|total frequency) of \d+|X\d+ has a small frequency block\.)");
    REQUIRE_FALSE(lines.empty());
    for (auto & l : lines)
        CHECK(std::regex_match(l, form));

    // 84 of 100 cases share one value; the rest split into a 10-case block of purity 90% and six singletons.
    std::vector<std::pair<std::string, std::string>> rows;
    std::vector<std::string> classes;
    for (int i = 0; i < 84; ++i) {
        rows.push_back({"m", "x"});
        classes.push_back(i < 42 ? "p" : "q");
    }
    for (int i = 0; i < 10; ++i) {
        rows.push_back({"n", "x"});
        classes.push_back(i < 9 ? "p" : "q");
    }
    for (int i = 0; i < 6; ++i) {
        rows.push_back({std::string(1, static_cast<char>('r' + i)), "x"});
        classes.push_back("q");
    }
    auto ds = two_columns(rows, classes);
    CHECK(linguistic_description(ds, 0.8, 0.1) == std::vector<std::string>{
        "X1, block, 1 has a total frequency of 84",
        "X1 has a small frequency block.",
        "X1, block, 2 has a purity of 90",
        "X2, block, 1 has a total frequency of 100",
    });

    auto flat = test_support::random_dataset(5, 600, 3, 3, 2);
    CHECK(linguistic_description(flat, 0.9, 0.0).empty());
}

TEST_CASE("flip is an involution and mirrors positions")
{
    auto layout = default_layout(mushroom());
    auto once = flip_attribute(layout, 5);
    CHECK(once.axes.at(5).flipped);
    CHECK(flip_attribute(once, 5) == layout);
    for (Code v = 1; v <= static_cast<Code>(mushroom().attribute(5).codebook.size()); ++v)
        CHECK(display_position(once, 5, v) == doctest::Approx(1.0 - display_position(layout, 5, v)));
    CHECK(display_position(layout, 1, 1) == display_position(once, 1, 1));
}

TEST_CASE("transforms only move display metadata")
{
    auto layout = default_layout(mushroom());
    auto base = contents(layout);
    std::vector<AxisLayout> variants = {
        flip_attribute(layout, 3),
        relocate_small_blocks(layout, 0.2),
        sort_blocks_by_class(layout, 2, true),
        sort_blocks_by_class(layout, 1, false),
        reorder(layout, order_attributes_by_purity(layout, 0.8)),
    };
    for (auto & v : variants) {
        CHECK(contents(v) == base);
        for (int a = 1; a <= 22; ++a)
            CHECK(axis_total(v, a) == 8124);
    }
    std::vector<int> bad = {1, 1};
    CHECK_THROWS_AS(reorder(layout, bad), ValidationError);
}

TEST_CASE("small blocks move to the top in their original order")
{
    std::vector<std::pair<std::string, std::string>> rows;
    for (auto [v, n] : std::vector<std::pair<std::string, int>>{{"a", 10}, {"b", 6}, {"c", 3}, {"d", 1}})
        for (int i = 0; i < n; ++i)
            rows.push_back({v, "x"});
    auto ds = two_columns(rows);
    auto layout = default_layout(ds);
    auto moved = relocate_small_blocks(layout, 0.2);
    std::vector<std::string> order;
    for (auto & b : moved.axes.at(1).blocks)
        order.push_back(ds.attribute(1).codebook.raw(b.values.front()));
    CHECK(order == std::vector<std::string>{"a", "b", "c", "d"});
    auto untouched = relocate_small_blocks(layout, 0.01);
    CHECK(untouched.axes == layout.axes);
    CHECK(untouched.order == layout.order);

    // Big blocks stay at the bottom even when small ones were interleaved.
    AxisLayout shuffled = layout;
    auto & blocks = shuffled.axes.at(1).blocks;
    std::swap(blocks[1], blocks[3]);
    auto fixed = relocate_small_blocks(shuffled, 0.2);
    order.clear();
    for (auto & b : fixed.axes.at(1).blocks)
        order.push_back(ds.attribute(1).codebook.raw(b.values.front()));
    CHECK(order == std::vector<std::string>{"a", "b", "d", "c"});
}

TEST_CASE("class sort puts the chosen class at the top")
{
    auto sorted = sort_blocks_by_class(default_layout(mushroom()), 1, true);
    for (auto & [a, axis] : sorted.axes) {
        bool reached = false;
        for (auto & b : axis.blocks) {
            if (b.dominant == 1)
                reached = true;
            else
                CHECK_FALSE(reached);
        }
    }
}

TEST_CASE("attribute order by purity")
{
    auto order = order_attributes_by_purity(default_layout(mushroom()), 0.8);
    REQUIRE(order.size() == 22);
    auto rank = std::find(order.begin(), order.end(), 5) - order.begin();
    CHECK(rank <= 1);

    auto same = test_support::random_dataset(3, 200, 1, 3, 2);
    auto cells = std::vector<Code>();
    for (std::size_t r = 0; r < same.size(); ++r)
        for (int k = 0; k < 3; ++k)
            cells.push_back(same.at(r, 1));
    std::vector<AttributeSchema> attrs;
    for (int k = 1; k <= 3; ++k)
        attrs.push_back({"a" + std::to_string(k), k, MeasurementKind::nominal, same.attribute(1).codebook, {}});
    auto copies = same.with_attributes(attrs, cells);
    CHECK(order_attributes_by_purity(default_layout(copies), 0.5) == std::vector<int>{1, 2, 3});
}

TEST_CASE("rules from selected blocks")
{
    auto & ds = mushroom();
    auto blocks = reference_blocks(ds, 5);
    auto pure = std::find_if(blocks.begin(), blocks.end(), [](auto & b) { return b.purity() == Ratio(1, 1); });
    REQUIRE(pure != blocks.end());
    auto rule = visual_rule_from_blocks({{*pure, true}}, pure->dominant);
    auto m = metrics(rule, ds);
    CHECK(m.precision() == Ratio(1, 1));
    CHECK(static_cast<std::size_t>(m.covered()) == pure->frequency);

    auto other = reference_blocks(ds, 20);
    auto two = visual_rule_from_blocks({{blocks.front(), true}, {other.front(), false}}, 2);
    REQUIRE(two.clauses().size() == 2);
    CHECK(two.clause_for(5)->polarity == Polarity::include);
    CHECK(two.clause_for(20)->polarity == Polarity::exclude);

    CHECK_THROWS_AS(visual_rule_from_blocks({}, 1), ValidationError);
    CHECK_THROWS_AS(visual_rule_from_blocks({{blocks[0], true}, {blocks[1], false}}, 1), ValidationError);
}

TEST_CASE("block purity equals single-clause precision")
{
    auto & ds = mushroom();
    for (int a = 1; a <= ds.width(); ++a)
        for (auto & b : reference_blocks(ds, a)) {
            auto m = metrics(Rule({Clause::eq(a, b.values.front())}, b.dominant), ds);
            REQUIRE(m.precision() == b.purity());
        }
}

TEST_CASE("triples survive the block decomposition")
{
    auto check = [](const Dataset & ds) {
        std::vector<std::vector<Block>> axes;
        for (int a = 1; a <= ds.width(); ++a)
            axes.push_back(reference_blocks(ds, a));
        CHECK(triples_from_blocks(axes) == counted_triples(ds));
        CHECK(triples_from_dataset(ds) == counted_triples(ds));
    };
    check(mushroom());
    check(test_support::random_dataset(1000, 1000, 6, 5, 3));
}

TEST_CASE("flipping the teaching assistant attributes lowers the great-rating blocks")
{
    auto & ds = test_support::tae();
    auto layout = default_layout(ds);
    auto flipped = layout;
    for (int a = 2; a <= ds.width(); ++a)
        flipped = flip_attribute(flipped, a);
    CHECK(mean_position_of_class(flipped, 3) < mean_position_of_class(layout, 3));
}

TEST_CASE("plot output")
{
    auto toy = two_columns({{"a", "x"}, {"b", "y"}, {"a", "x"}}, {"p", "q", "p"});
    PlotSpec spec{default_layout(toy)};
    auto svg = render_svg(toy, spec);
    CHECK(svg == render_svg(toy, spec));
    std::size_t axes = 0, lines = 0;
    for (std::size_t p = svg.find("class=\"axis\""); p != std::string::npos; p = svg.find("class=\"axis\"", p + 1))
        ++axes;
    for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1))
        ++lines;
    CHECK(axes == 2);
    CHECK(lines >= 1);
    CHECK(lines <= 3);
    auto j = export_plot_json(toy, spec);
    CHECK(j["lines"].size() == lines);
    std::size_t weight = 0;
    for (auto & l : j["lines"])
        weight += l["weight"].get<std::size_t>();
    CHECK(weight == 3);

    PlotSpec m{default_layout(mushroom(), {}, 0.8)};
    auto plot = export_plot_json(mushroom(), m);
    REQUIRE(plot["axes"].size() == 22);
    for (auto & axis : plot["axes"]) {
        int a = axis["attr"];
        auto kept = purity_filter(m.layout.axes.at(a).blocks, 0.8);
        REQUIRE(axis["blocks"].size() == kept.size());
        for (std::size_t k = 0; k < kept.size(); ++k)
            CHECK(axis["blocks"][k]["values"].get<std::vector<Code>>() == kept[k].values);
    }
}
