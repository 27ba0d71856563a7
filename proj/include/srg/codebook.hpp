#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace srg {

using Code = std::int32_t;
using ClassId = std::int32_t;

enum class OrderingPolicy { documentation, alphabetical, first_appearance, explicit_order };

std::string_view to_string(OrderingPolicy policy);
OrderingPolicy parse_policy(std::string_view text);

// Bijection between raw tokens and codes 1..k. The position of a token in
// values() is its code minus one.
class Codebook {
public:
    Codebook() = default;
    explicit Codebook(std::vector<std::string> values, OrderingPolicy policy = OrderingPolicy::explicit_order);

    // Builds a codebook from tokens listed in order of first appearance,
    // ordered according to `policy`. Numeric tokens sort by value under the
    // alphabetical policy; `missing` always sorts last.
    static Codebook from_observed(const std::vector<std::string> & appearance_order, OrderingPolicy policy,
        std::string_view missing = "?");

    Code code(std::string_view raw) const;
    std::optional<Code> find(std::string_view raw) const;
    const std::string & raw(Code code) const;
    bool contains(Code code) const { return code >= 1 && code <= static_cast<Code>(values_.size()); }

    // Appends a token that is not yet present and returns its code.
    Code add(const std::string & raw);

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    const std::vector<std::string> & values() const { return values_; }
    OrderingPolicy policy() const { return policy_; }

    friend bool operator==(const Codebook & a, const Codebook & b)
    {
        return a.values_ == b.values_ && a.policy_ == b.policy_;
    }

private:
    std::vector<std::string> values_;
    std::unordered_map<std::string, Code> index_;
    OrderingPolicy policy_ = OrderingPolicy::explicit_order;
};

}
