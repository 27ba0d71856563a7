#pragma once

#include <srg/blocks.hpp>
#include <srg/rule.hpp>

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace srg {

struct AxisState {
    // Display order, bottom first.
    std::vector<Block> blocks;
    bool flipped = false;

    friend bool operator==(const AxisState &, const AxisState &) = default;
};

struct AxisLayout {
    // Attribute permutation, left to right.
    std::vector<int> order;
    std::map<int, AxisState> axes;
    double small_block_threshold = 0.0;
    double purity_threshold = 0.0;

    friend bool operator==(const AxisLayout &, const AxisLayout &) = default;
};

struct Span {
    double y0 = 0;
    double y1 = 0;
};

AxisLayout default_layout(const Dataset & dataset, const BlockOptions & options = {}, double purity_threshold = 0.0);

// Normalized [0,1] extent of each block in display order; flipping maps y to 1 - y.
std::vector<Span> place_blocks(const AxisState & axis);
// Centre of the block holding `value`.
double display_position(const AxisLayout & layout, int attribute, Code value);

AxisLayout flip_attribute(const AxisLayout & layout, int attribute);
AxisLayout reorder(const AxisLayout & layout, const std::vector<int> & order);
// Attributes by frequency-weighted mass of blocks at or above the purity threshold, descending; stable.
std::vector<int> order_attributes_by_purity(const AxisLayout & layout, double purity_threshold);
// Blocks below `threshold` of the cases move to the top, keeping their relative order.
AxisLayout relocate_small_blocks(const AxisLayout & layout, double threshold = 0.2);
// Blocks dominated by `cls` move to the top (or bottom), keeping relative order.
AxisLayout sort_blocks_by_class(const AxisLayout & layout, ClassId cls, bool on_top = true);

struct BlockSelection {
    Block block;
    bool in = true;
};

Rule visual_rule_from_blocks(const std::vector<BlockSelection> & selections, ClassId target);

struct PlotSpec {
    AxisLayout layout;
    // Fill colour per class id - 1; defaults to the magenta/blue/yellow palette.
    std::vector<std::string> colors;
    int width = 0;
    int height = 480;
};

nlohmann::json export_plot_json(const Dataset & dataset, const PlotSpec & spec);
std::string render_svg(const Dataset & dataset, const PlotSpec & spec);

nlohmann::json layout_to_json(const AxisLayout & layout);

}
