#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>

namespace srg {

enum class MeasurementKind { nominal, ordinal, interval, ratio, absolute, cyclical };

enum class Relation { eq, neq, leq, difference, ratio, cyclic_difference };

std::string_view to_string(MeasurementKind kind);
std::string_view to_string(Relation relation);
MeasurementKind parse_measurement(std::string_view text);
Relation parse_relation(std::string_view text);

// absolute is kept as ratio everywhere after parsing.
MeasurementKind storage_kind(MeasurementKind kind);

bool is_numeric(MeasurementKind kind);

std::set<Relation> allowed_ops(MeasurementKind kind);

struct Violation {
    int attribute = 0;
    Relation relation = Relation::eq;
    MeasurementKind kind = MeasurementKind::nominal;

    std::string message() const;
    friend bool operator==(const Violation &, const Violation &) = default;
};

// One relation applied to one attribute inside some expression.
struct RelationUse {
    int attribute = 0;
    Relation relation = Relation::eq;
};

struct AttributeSchema;

// Returns the first use whose relation is outside the attribute's whitelist.
// Throws ValidationError when an index does not name an attribute.
std::optional<Violation> guard(std::span<const RelationUse> uses, std::span<const AttributeSchema> schema);

}
