#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace srg {

using AttributeGroup = std::vector<int>;

struct GroupingStrategy {
    enum class Kind { sequential, random, most_frequent, expert, prior_attributes };
    Kind kind = Kind::sequential;
    // sequential: attributes per group; random: group size; most_frequent and
    // prior_attributes: chunk size used to split the attribute list.
    int size = 3;
    // random: number of groups.
    int count = 30;
    std::uint64_t seed = 1;
    // expert groups, or prior groups given explicitly.
    std::vector<AttributeGroup> groups;
    // prior_attributes: ordered attribute list to split.
    std::vector<int> attributes;
    // most_frequent: share of a group's rules an attribute must appear in.
    double threshold = 0.5;
};

std::string_view to_string(GroupingStrategy::Kind kind);

// Consecutive chunks of `size`; a short remainder joins the last chunk.
std::vector<AttributeGroup> chunk(const std::vector<int> & attributes, int size);

// most_frequent needs mined rules and is resolved by the miner; here it
// splits `attributes` like prior_attributes.
std::vector<AttributeGroup> form_groups(const GroupingStrategy & strategy, int n_attributes);

// One group per non-empty line; indices separated by spaces or commas; '#' starts a comment.
std::vector<AttributeGroup> parse_group_file(const std::string & text);
std::vector<AttributeGroup> read_group_file(const std::filesystem::path & path);

// Compact command-line forms: "sequential:3", "random:30x3", "groups:5;20;8,12,21",
// "prior:5,9,15,19,20,21,22/3", "expert:<file>", "most_frequent:0.5/4".
GroupingStrategy parse_grouping(const std::string & text, std::uint64_t seed = 1);

nlohmann::json grouping_to_json(const GroupingStrategy & strategy);
GroupingStrategy grouping_from_json(const nlohmann::json & doc);

// Uniform index in [0, n) from a 64-bit engine, identical on every platform.
std::size_t uniform_index(std::mt19937_64 & rng, std::size_t n);

template <typename T>
void portable_shuffle(std::vector<T> & items, std::mt19937_64 & rng)
{
    for (std::size_t i = items.size(); i > 1; --i)
        std::swap(items[i - 1], items[uniform_index(rng, i)]);
}

}
