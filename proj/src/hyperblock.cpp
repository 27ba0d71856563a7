#include <srg/errors.hpp>
#include <srg/hyperblock.hpp>

#include <algorithm>
#include <cmath>

namespace srg {

int side_attribute(const BlockSide & side)
{
    return std::visit([](auto & s) { return s.attribute; }, side);
}

Hyperblock::Hyperblock(std::vector<BlockSide> sides) : sides_(std::move(sides))
{
    std::vector<int> attrs;
    for (auto & s : sides_)
        attrs.push_back(side_attribute(s));
    std::sort(attrs.begin(), attrs.end());
    if (std::adjacent_find(attrs.begin(), attrs.end()) != attrs.end())
        throw ValidationError("hyperblock has two sides on one attribute");
    for (auto & s : sides_) {
        if (auto * n = std::get_if<NominalSide>(&s)) {
            if (n->allowed.empty())
                throw ValidationError("nominal side needs a non-empty value set");
            std::sort(n->allowed.begin(), n->allowed.end());
        }
        if (auto * o = std::get_if<OrdinalSide>(&s); o && o->start > o->end)
            throw ValidationError("ordinal side start exceeds end");
        if (auto * u = std::get_if<NumericSide>(&s); u && u->length < 0)
            throw ValidationError("numeric side length must be non-negative");
    }
}

void Hyperblock::validate(std::span<const AttributeSchema> schema) const
{
    for (auto & s : sides_) {
        int a = side_attribute(s);
        if (a < 1 || a > static_cast<int>(schema.size()))
            throw ValidationError("unknown attribute index " + std::to_string(a));
        auto kind = storage_kind(schema[a - 1].kind);
        bool ok = std::visit(
            [&](auto & side) {
                using T = std::decay_t<decltype(side)>;
                if constexpr (std::is_same_v<T, NumericSide>)
                    return is_numeric(kind);
                else if constexpr (std::is_same_v<T, OrdinalSide>)
                    return kind == MeasurementKind::ordinal;
                else
                    return kind == MeasurementKind::nominal;
            },
            s);
        if (! ok)
            throw ValidationError("side kind does not match " + std::string(to_string(kind)) + " attribute x"
                + std::to_string(a));
    }
}

bool Hyperblock::contains(std::span<const Code> row, std::span<const AttributeSchema> schema) const
{
    for (auto & s : sides_) {
        bool inside = std::visit(
            [&](auto & side) {
                using T = std::decay_t<decltype(side)>;
                Code v = row[side.attribute - 1];
                if constexpr (std::is_same_v<T, NumericSide>) {
                    double x = schema[side.attribute - 1].numeric_value(v);
                    return ! std::isnan(x) && std::fabs(x - side.center) <= side.length / 2;
                }
                else if constexpr (std::is_same_v<T, OrdinalSide>)
                    return side.start <= v && v <= side.end;
                else
                    return std::binary_search(side.allowed.begin(), side.allowed.end(), v);
            },
            s);
        if (! inside)
            return false;
    }
    return true;
}

bool Hyperblock::contains(const Dataset & dataset, std::size_t row) const
{
    return contains(dataset.row(row), dataset.attributes());
}

Hyperblock Hyperblock::with_side(BlockSide side) const
{
    auto sides = sides_;
    sides.push_back(std::move(side));
    return Hyperblock(std::move(sides));
}

Rule Hyperblock::to_rule(ClassId target, std::span<const AttributeSchema> schema) const
{
    std::vector<Clause> clauses;
    for (auto & s : sides_) {
        int a = side_attribute(s);
        std::vector<Code> values;
        if (auto * n = std::get_if<NominalSide>(&s))
            values = n->allowed;
        else if (auto * o = std::get_if<OrdinalSide>(&s))
            for (Code c = o->start; c <= o->end; ++c)
                values.push_back(c);
        else {
            auto & u = std::get<NumericSide>(s);
            auto & attr = schema[a - 1];
            for (Code c = 1; c <= static_cast<Code>(attr.codebook.size()); ++c) {
                double x = attr.numeric_value(c);
                if (! std::isnan(x) && std::fabs(x - u.center) <= u.length / 2)
                    values.push_back(c);
            }
        }
        if (values.empty())
            throw ValidationError("side on x" + std::to_string(a) + " admits no code");
        clauses.push_back(Clause::in(a, values));
    }
    return Rule(std::move(clauses), target);
}

PurityReport purity(const Hyperblock & block, const Dataset & dataset)
{
    block.validate(dataset.attributes());
    PurityReport p;
    for (auto id : dataset.class_ids())
        p.histogram[id] = 0;
    for (std::size_t r = 0; r < dataset.size(); ++r)
        if (block.contains(dataset, r)) {
            ++p.histogram[dataset.label(r)];
            ++p.total;
        }
    int present = 0;
    for (auto & [c, n] : p.histogram)
        present += n > 0;
    p.pure = present == 1;
    return p;
}

}
