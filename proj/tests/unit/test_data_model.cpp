#include "support.hpp"

#include <srg/measurement.hpp>
#include <srg/rule.hpp>

#include <doctest.h>

#include <algorithm>

using namespace srg;
using test_support::mushroom;
using test_support::mushroom_raw;

TEST_CASE("mushroom loads with 22 attributes and two classes")
{
    auto & ds = mushroom();
    CHECK(ds.size() == 8124);
    CHECK(ds.width() == 22);
    CHECK(ds.class_name(1) == "p");
    CHECK(ds.class_name(2) == "e");

    std::size_t p = 0;
    for (auto & row : mushroom_raw())
        p += row[0] == "p";
    CHECK(ds.class_count(1) == p);
    CHECK(ds.class_count(2) == 8124 - p);
}

TEST_CASE("every cell decodes back to its raw token")
{
    auto & ds = mushroom();
    auto & raw = mushroom_raw();
    REQUIRE(raw.size() == ds.size());
    for (std::size_t r = 0; r < ds.size(); r += 7)
        for (int a = 1; a <= ds.width(); ++a)
            REQUIRE(ds.attribute(a).codebook.raw(ds.at(r, a)) == raw[r][a]);
}

TEST_CASE("odor codes follow the documentation listing")
{
    auto & odor = mushroom().attribute(5).codebook;
    std::vector<std::string> listed = {"a", "l", "c", "y", "f", "m", "n", "p", "s"};
    for (std::size_t i = 0; i < listed.size(); ++i)
        CHECK(odor.code(listed[i]) == static_cast<Code>(i + 1));
}

TEST_CASE("missing stalk-root values keep their own code")
{
    auto & ds = mushroom();
    auto & book = ds.attribute(11).codebook;
    REQUIRE(book.find("?"));
    std::size_t expected = 0;
    for (auto & row : mushroom_raw())
        expected += row[11] == "?";
    auto col = ds.column(11);
    CHECK(static_cast<std::size_t>(std::count(col.begin(), col.end(), *book.find("?"))) == expected);
    CHECK(expected > 0);
}

TEST_CASE("schema file round trips byte for byte")
{
    auto path = test_support::data_path("mushroom/schema.json");
    CHECK(schema_text(read_schema(path)) == test_support::slurp(path));
    auto tae_path = test_support::data_path("tae/schema.json");
    CHECK(schema_text(read_schema(tae_path)) == test_support::slurp(tae_path));
    CHECK(schema_text(mushroom().schema()) == test_support::slurp(path));
}

TEST_CASE("loading is deterministic")
{
    CsvOptions options;
    options.schema = read_schema(test_support::data_path("mushroom/schema.json"));
    auto a = load_csv(test_support::data_path("mushroom/agaricus-lepiota.data"), options);
    CHECK(a.serialize() == mushroom().serialize());
}

TEST_CASE("csv parsing errors")
{
    CHECK_THROWS_AS(parse_csv(""), StructuralError);
    CHECK_THROWS_AS(parse_csv("\n\n"), StructuralError);
    try {
        parse_csv("a,b,x\na,b,y\na,y\n");
        FAIL("ragged row accepted");
    }
    catch (const StructuralError & e) {
        CHECK(e.row() == 3);
    }
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), IoError);
}

TEST_CASE("alphabetical policy on a toy file")
{
    auto ds = parse_csv("b,a,x\na,b,y\nb,b,x\n");
    CHECK(ds.width() == 2);
    CHECK(ds.attribute(1).codebook.values() == std::vector<std::string>{"a", "b"});
    CHECK(ds.at(0, 1) == 2);
    CHECK(ds.at(1, 1) == 1);
    CHECK(ds.class_name(1) == "x");
}

TEST_CASE("alphabetical policy sorts numbers by value and missing last")
{
    auto book = Codebook::from_observed({"10", "?", "9", "100"}, OrderingPolicy::alphabetical);
    CHECK(book.values() == std::vector<std::string>{"9", "10", "100", "?"});
    auto first = Codebook::from_observed({"z", "?", "a"}, OrderingPolicy::first_appearance);
    CHECK(first.values() == std::vector<std::string>{"z", "a", "?"});
    CHECK_THROWS_AS(Codebook({"a", "a"}), ValidationError);
}

TEST_CASE("unknown class token with a fixed class codebook")
{
    Schema schema;
    schema.attributes.push_back({"x", 1, MeasurementKind::nominal, Codebook{}, {}});
    schema.cls = {"class", 2, Codebook({"p", "e"})};
    CsvOptions options;
    options.schema = schema;
    CHECK_NOTHROW(parse_csv("a,p\nb,e\n", options));
    CHECK_THROWS_AS(parse_csv("a,p\nb,q\n", options), ValidationError);
}

TEST_CASE("relation whitelists per measurement type")
{
    using R = Relation;
    CHECK(allowed_ops(MeasurementKind::nominal) == std::set<R>{R::eq, R::neq});
    auto ordinal = allowed_ops(MeasurementKind::ordinal);
    CHECK(ordinal.count(R::leq) == 1);
    CHECK(ordinal.count(R::difference) == 0);
    CHECK(allowed_ops(MeasurementKind::interval) == std::set<R>{R::eq, R::neq, R::leq, R::difference});
    CHECK(allowed_ops(MeasurementKind::ratio).count(R::ratio) == 1);
    CHECK(allowed_ops(MeasurementKind::cyclical) == std::set<R>{R::eq, R::neq, R::cyclic_difference});
    CHECK(storage_kind(MeasurementKind::absolute) == MeasurementKind::ratio);
    CHECK(allowed_ops(MeasurementKind::absolute) == allowed_ops(MeasurementKind::ratio));
}

TEST_CASE("guard accepts whitelisted relations and names violations")
{
    auto attrs = mushroom().attributes();
    std::vector<RelationUse> ok = {{4, Relation::eq}, {4, Relation::neq}};
    CHECK_FALSE(guard(ok, attrs));
    std::vector<RelationUse> bad = {{4, Relation::eq}, {4, Relation::leq}};
    auto v = guard(bad, attrs);
    REQUIRE(v);
    CHECK(*v == Violation{4, Relation::leq, MeasurementKind::nominal});
    CHECK(v->message().find("x4") != std::string::npos);
    std::vector<RelationUse> unknown = {{23, Relation::eq}};
    CHECK_THROWS_AS(guard(unknown, attrs), ValidationError);

    std::vector<AttributeSchema> ord = {{"grade", 1, MeasurementKind::ordinal, Codebook({"1", "2", "3"}), {}}};
    std::vector<RelationUse> diff = {{1, Relation::difference}};
    REQUIRE(guard(diff, ord));
    CHECK(guard(diff, ord)->kind == MeasurementKind::ordinal);
}

TEST_CASE("per-attribute extra relations widen the whitelist")
{
    std::vector<AttributeSchema> attrs = {
        {"occupation", 1, MeasurementKind::nominal, Codebook({"doctor", "teacher", "engineer"}), {Relation::leq}}};
    std::vector<RelationUse> use = {{1, Relation::leq}};
    CHECK_FALSE(guard(use, attrs));
    attrs[0].extra_relations.clear();
    CHECK(guard(use, attrs));
}

TEST_CASE("rules built from parsed text pass the guard by construction")
{
    auto rule = parse_rule_text("[(x5=3) v (x5=4) & (x9!=2)] => C1");
    for (auto & use : rule.relation_uses())
        CHECK(allowed_ops(mushroom().attribute(use.attribute).kind).count(use.relation) == 1);
    CHECK_NOTHROW(validate_rule(rule, mushroom()));
}

TEST_CASE("datasets are immutable values; subset yields a new dataset")
{
    auto & ds = mushroom();
    std::vector<std::size_t> rows = {0, 5, 9};
    auto sub = ds.subset(rows);
    CHECK(sub.size() == 3);
    CHECK(ds.size() == 8124);
    for (int a = 1; a <= ds.width(); ++a)
        CHECK(sub.at(1, a) == ds.at(5, a));
}
