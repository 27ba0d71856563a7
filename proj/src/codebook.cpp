#include <srg/codebook.hpp>
#include <srg/errors.hpp>

#include <algorithm>
#include <charconv>

namespace srg {

std::string_view to_string(OrderingPolicy policy)
{
    switch (policy) {
    case OrderingPolicy::documentation:
        return "documentation-order";
    case OrderingPolicy::alphabetical:
        return "alphabetical";
    case OrderingPolicy::first_appearance:
        return "first-appearance";
    case OrderingPolicy::explicit_order:
        return "explicit";
    }
    return "explicit";
}

OrderingPolicy parse_policy(std::string_view text)
{
    if (text == "documentation-order" || text == "documentation")
        return OrderingPolicy::documentation;
    if (text == "alphabetical")
        return OrderingPolicy::alphabetical;
    if (text == "first-appearance")
        return OrderingPolicy::first_appearance;
    if (text == "explicit")
        return OrderingPolicy::explicit_order;
    throw ValidationError("unknown ordering policy '" + std::string(text) + "'");
}

Codebook::Codebook(std::vector<std::string> values, OrderingPolicy policy) : policy_(policy)
{
    for (auto & v : values)
        if (index_.contains(v))
            throw ValidationError("duplicate codebook value '" + v + "'");
        else
            add(v);
}

namespace {
    std::optional<double> as_number(const std::string & s)
    {
        double v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
            return std::nullopt;
        return v;
    }
}

Codebook Codebook::from_observed(const std::vector<std::string> & appearance_order, OrderingPolicy policy,
    std::string_view missing)
{
    std::vector<std::string> values;
    bool saw_missing = false;
    for (auto & v : appearance_order) {
        if (v == missing)
            saw_missing = true;
        else
            values.push_back(v);
    }

    if (policy == OrderingPolicy::alphabetical) {
        bool numeric = std::all_of(values.begin(), values.end(), [](auto & v) { return as_number(v).has_value(); });
        if (numeric)
            std::stable_sort(values.begin(), values.end(),
                [](auto & a, auto & b) { return *as_number(a) < *as_number(b); });
        else
            std::sort(values.begin(), values.end());
    }
    if (saw_missing)
        values.emplace_back(missing);
    return Codebook(std::move(values), policy);
}

Code Codebook::code(std::string_view raw) const
{
    if (auto c = find(raw))
        return *c;
    throw ValidationError("value '" + std::string(raw) + "' is not in the codebook");
}

std::optional<Code> Codebook::find(std::string_view raw) const
{
    auto it = index_.find(std::string(raw));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

const std::string & Codebook::raw(Code code) const
{
    if (! contains(code))
        throw ValidationError("code " + std::to_string(code) + " is outside the codebook");
    return values_[code - 1];
}

Code Codebook::add(const std::string & raw)
{
    if (auto c = find(raw))
        return *c;
    values_.push_back(raw);
    auto code = static_cast<Code>(values_.size());
    index_.emplace(raw, code);
    return code;
}

}
