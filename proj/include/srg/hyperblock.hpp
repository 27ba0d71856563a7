#pragma once

#include <srg/dataset.hpp>
#include <srg/rule.hpp>

#include <map>
#include <span>
#include <variant>
#include <vector>

namespace srg {

// |x - center| <= length / 2 on an interval or ratio attribute.
struct NumericSide {
    int attribute = 0;
    double center = 0;
    double length = 0;
};

// start <= x <= end in code order on an ordinal attribute.
struct OrdinalSide {
    int attribute = 0;
    Code start = 1;
    Code end = 1;
};

// x in allowed on a nominal attribute.
struct NominalSide {
    int attribute = 0;
    std::vector<Code> allowed;
};

using BlockSide = std::variant<NumericSide, OrdinalSide, NominalSide>;

int side_attribute(const BlockSide & side);

class Hyperblock {
public:
    Hyperblock() = default;
    explicit Hyperblock(std::vector<BlockSide> sides);

    // Throws ValidationError when a side's kind does not fit its attribute.
    void validate(std::span<const AttributeSchema> schema) const;

    bool contains(std::span<const Code> row, std::span<const AttributeSchema> schema) const;
    bool contains(const Dataset & dataset, std::size_t row) const;

    Hyperblock with_side(BlockSide side) const;
    const std::vector<BlockSide> & sides() const { return sides_; }

    // Conjunctive rule with one include clause per side; numeric sides are
    // expressed through the codes whose values fall inside the interval.
    Rule to_rule(ClassId target, std::span<const AttributeSchema> schema) const;

private:
    std::vector<BlockSide> sides_;
};

struct PurityReport {
    std::map<ClassId, std::size_t> histogram;
    std::size_t total = 0;
    bool pure = false;
};

PurityReport purity(const Hyperblock & block, const Dataset & dataset);

}
