#include <srg/dataset.hpp>
#include <srg/errors.hpp>
#include <srg/measurement.hpp>

#include <array>
#include <utility>

namespace srg {

namespace {
    constexpr std::array<std::pair<MeasurementKind, std::string_view>, 6> kind_names{{
        {MeasurementKind::nominal, "nominal"},
        {MeasurementKind::ordinal, "ordinal"},
        {MeasurementKind::interval, "interval"},
        {MeasurementKind::ratio, "ratio"},
        {MeasurementKind::absolute, "absolute"},
        {MeasurementKind::cyclical, "cyclical"},
    }};

    constexpr std::array<std::pair<Relation, std::string_view>, 6> relation_names{{
        {Relation::eq, "eq"},
        {Relation::neq, "neq"},
        {Relation::leq, "leq"},
        {Relation::difference, "difference"},
        {Relation::ratio, "ratio"},
        {Relation::cyclic_difference, "cyclic-difference"},
    }};
}

std::string_view to_string(MeasurementKind kind)
{
    for (auto & [k, name] : kind_names)
        if (k == kind)
            return name;
    return "unknown";
}

std::string_view to_string(Relation relation)
{
    for (auto & [r, name] : relation_names)
        if (r == relation)
            return name;
    return "unknown";
}

MeasurementKind parse_measurement(std::string_view text)
{
    for (auto & [k, name] : kind_names)
        if (name == text)
            return k;
    throw ValidationError("unknown measurement type '" + std::string(text) + "'");
}

Relation parse_relation(std::string_view text)
{
    for (auto & [r, name] : relation_names)
        if (name == text)
            return r;
    throw ValidationError("unknown relation '" + std::string(text) + "'");
}

MeasurementKind storage_kind(MeasurementKind kind)
{
    return kind == MeasurementKind::absolute ? MeasurementKind::ratio : kind;
}

bool is_numeric(MeasurementKind kind)
{
    auto k = storage_kind(kind);
    return k == MeasurementKind::interval || k == MeasurementKind::ratio;
}

std::set<Relation> allowed_ops(MeasurementKind kind)
{
    switch (storage_kind(kind)) {
    case MeasurementKind::nominal:
        return {Relation::eq, Relation::neq};
    case MeasurementKind::ordinal:
        return {Relation::eq, Relation::neq, Relation::leq};
    case MeasurementKind::interval:
        return {Relation::eq, Relation::neq, Relation::leq, Relation::difference};
    case MeasurementKind::ratio:
        return {Relation::eq, Relation::neq, Relation::leq, Relation::difference, Relation::ratio};
    case MeasurementKind::cyclical:
        return {Relation::eq, Relation::neq, Relation::cyclic_difference};
    case MeasurementKind::absolute:
        break;
    }
    return {};
}

std::string Violation::message() const
{
    return "relation " + std::string(to_string(relation)) + " is not allowed on " + std::string(to_string(kind))
        + " attribute x" + std::to_string(attribute);
}

std::optional<Violation> guard(std::span<const RelationUse> uses, std::span<const AttributeSchema> schema)
{
    for (auto & use : uses) {
        if (use.attribute < 1 || use.attribute > static_cast<int>(schema.size()))
            throw ValidationError("unknown attribute index " + std::to_string(use.attribute));
        auto & attr = schema[use.attribute - 1];
        auto ops = allowed_ops(attr.kind);
        if (ops.contains(use.relation) || attr.extra_relations.contains(use.relation))
            continue;
        return Violation{use.attribute, use.relation, storage_kind(attr.kind)};
    }
    return std::nullopt;
}

}
