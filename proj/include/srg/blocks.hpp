#pragma once

#include <srg/dataset.hpp>
#include <srg/ratio.hpp>

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace srg {

enum class BlockRole { normal, merged_small, merged_non_dominant };

std::string_view to_string(BlockRole role);

// Reference counts of one value inside a block; histogram[c - 1] counts reference code c.
struct BlockMember {
    Code value = 0;
    std::vector<std::size_t> histogram;

    friend bool operator==(const BlockMember &, const BlockMember &) = default;
};

struct Block {
    int attribute = 0;
    std::vector<Code> values;
    std::size_t frequency = 0;
    std::vector<std::size_t> histogram;
    // One entry per value; merged blocks stay lossless through these.
    std::vector<BlockMember> members;
    // Reference code with the largest count, lowest code on ties; 0 for an empty block.
    Code dominant = 0;
    BlockRole role = BlockRole::normal;

    Ratio purity() const;
    double purity_value() const { return purity().value(); }

    friend bool operator==(const Block &, const Block &) = default;
};

struct BlockOptions {
    // Values whose share of all cases is below this join one block at the top.
    double small_threshold = 0.0;
    // Values whose purity is below this join one grey block; 0 disables.
    double merge_below_purity = 0.0;
};

// One block per observed value, bottom first: frequency descending, then code.
// Histograms use the class as the reference.
std::vector<Block> frequency_blocks(const Dataset & dataset, int attribute);

// Blocks of `attribute` with histograms over `reference` (an attribute index, or the class when empty).
std::vector<Block> reference_blocks(const Dataset & dataset, int attribute, std::optional<int> reference = {},
    const BlockOptions & options = {});

std::vector<Block> purity_filter(const std::vector<Block> & blocks, double min_purity);

// Fixed-format lines: total-frequency blocks, small-block notes, then high-purity blocks.
std::vector<std::string> linguistic_description(const Dataset & dataset, double purity_threshold = 0.8,
    double size_threshold = 0.1);

// (attribute, value, class) counts recovered from blocks built against the class.
std::map<std::tuple<int, Code, ClassId>, std::size_t> triples_from_blocks(const std::vector<std::vector<Block>> & axes);
std::map<std::tuple<int, Code, ClassId>, std::size_t> triples_from_dataset(const Dataset & dataset);

nlohmann::json block_to_json(const Block & block);

}
