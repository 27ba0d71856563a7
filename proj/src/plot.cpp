#include <srg/errors.hpp>
#include <srg/plot.hpp>

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace srg {

AxisLayout default_layout(const Dataset & dataset, const BlockOptions & options, double purity_threshold)
{
    AxisLayout layout;
    layout.small_block_threshold = options.small_threshold;
    layout.purity_threshold = purity_threshold;
    for (int a = 1; a <= dataset.width(); ++a) {
        layout.order.push_back(a);
        layout.axes[a].blocks = reference_blocks(dataset, a, {}, options);
    }
    return layout;
}

std::vector<Span> place_blocks(const AxisState & axis)
{
    std::size_t total = 0;
    for (auto & b : axis.blocks)
        total += b.frequency;
    std::vector<Span> out;
    std::size_t below = 0;
    for (auto & b : axis.blocks) {
        Span s{total ? double(below) / total : 0.0, total ? double(below + b.frequency) / total : 0.0};
        if (axis.flipped)
            s = {1.0 - s.y1, 1.0 - s.y0};
        out.push_back(s);
        below += b.frequency;
    }
    return out;
}

namespace {
    const AxisState & axis_of(const AxisLayout & layout, int attribute)
    {
        auto it = layout.axes.find(attribute);
        if (it == layout.axes.end())
            throw ValidationError("layout has no axis for x" + std::to_string(attribute));
        return it->second;
    }

    std::size_t axis_total(const AxisState & axis)
    {
        std::size_t n = 0;
        for (auto & b : axis.blocks)
            n += b.frequency;
        return n;
    }

    template <typename Pred>
    AxisLayout move_to_top(const AxisLayout & layout, Pred to_top)
    {
        auto out = layout;
        for (auto & [a, axis] : out.axes) {
            std::size_t total = axis_total(axis);
            std::stable_partition(axis.blocks.begin(), axis.blocks.end(),
                [&](const Block & b) { return ! to_top(b, total); });
        }
        return out;
    }
}

double display_position(const AxisLayout & layout, int attribute, Code value)
{
    auto & axis = axis_of(layout, attribute);
    auto spans = place_blocks(axis);
    for (std::size_t i = 0; i < axis.blocks.size(); ++i)
        if (std::binary_search(axis.blocks[i].values.begin(), axis.blocks[i].values.end(), value))
            return (spans[i].y0 + spans[i].y1) / 2;
    throw ValidationError("value " + std::to_string(value) + " has no block on x" + std::to_string(attribute));
}

AxisLayout flip_attribute(const AxisLayout & layout, int attribute)
{
    axis_of(layout, attribute);
    auto out = layout;
    out.axes[attribute].flipped = ! out.axes[attribute].flipped;
    return out;
}

AxisLayout reorder(const AxisLayout & layout, const std::vector<int> & order)
{
    auto a = order, b = layout.order;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
        throw ValidationError("attribute order is not a permutation of the layout's axes");
    auto out = layout;
    out.order = order;
    return out;
}

std::vector<int> order_attributes_by_purity(const AxisLayout & layout, double purity_threshold)
{
    std::map<int, std::size_t> mass;
    for (int a : layout.order)
        for (auto & b : purity_filter(axis_of(layout, a).blocks, purity_threshold))
            mass[a] += b.frequency;
    auto order = layout.order;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return mass[x] > mass[y]; });
    return order;
}

AxisLayout relocate_small_blocks(const AxisLayout & layout, double threshold)
{
    if (! (threshold >= 0 && threshold <= 1))
        throw ValidationError("small block threshold must be in [0,1]");
    auto out = move_to_top(layout, [&](const Block & b, std::size_t total) {
        return static_cast<long double>(b.frequency) < threshold * static_cast<long double>(total);
    });
    out.small_block_threshold = threshold;
    return out;
}

AxisLayout sort_blocks_by_class(const AxisLayout & layout, ClassId cls, bool on_top)
{
    return move_to_top(layout, [&](const Block & b, std::size_t) { return (b.dominant == cls) == on_top; });
}

Rule visual_rule_from_blocks(const std::vector<BlockSelection> & selections, ClassId target)
{
    if (selections.empty())
        throw ValidationError("select at least one block");
    std::set<int> seen;
    std::vector<Clause> clauses;
    for (auto & s : selections) {
        if (! seen.insert(s.block.attribute).second)
            throw ValidationError("two selections on x" + std::to_string(s.block.attribute));
        if (s.block.values.empty())
            throw ValidationError("selected block has no values");
        clauses.emplace_back(s.block.attribute, s.in ? Polarity::include : Polarity::exclude, s.block.values);
    }
    return Rule(std::move(clauses), target);
}

namespace {
    const std::vector<std::string> palette = {"#d81b9c", "#1f5fd6", "#e6c619", "#2ca02c", "#7f7f7f", "#ff7f0e"};

    std::string color(const PlotSpec & spec, ClassId c)
    {
        if (c >= 1 && static_cast<std::size_t>(c) <= spec.colors.size())
            return spec.colors[c - 1];
        return palette[(c - 1) % palette.size()];
    }

    std::string fixed(double v)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return buf;
    }

    struct Line {
        std::vector<double> path;
        std::size_t weight = 0;
        ClassId cls = 0;
    };

    std::vector<Line> lines_of(const Dataset & dataset, const AxisLayout & layout)
    {
        std::map<std::pair<std::vector<Code>, ClassId>, std::size_t> counts;
        for (std::size_t r = 0; r < dataset.size(); ++r) {
            std::vector<Code> key;
            for (int a : layout.order)
                key.push_back(dataset.at(r, a));
            ++counts[{key, dataset.label(r)}];
        }
        std::map<int, std::map<Code, double>> pos;
        for (int a : layout.order) {
            auto & axis = axis_of(layout, a);
            auto spans = place_blocks(axis);
            for (std::size_t i = 0; i < axis.blocks.size(); ++i)
                for (Code v : axis.blocks[i].values)
                    pos[a][v] = (spans[i].y0 + spans[i].y1) / 2;
        }
        std::vector<Line> out;
        for (auto & [key, n] : counts) {
            Line l;
            for (std::size_t i = 0; i < layout.order.size(); ++i)
                l.path.push_back(pos[layout.order[i]][key.first[i]]);
            l.weight = n;
            l.cls = key.second;
            out.push_back(std::move(l));
        }
        return out;
    }
}

nlohmann::json export_plot_json(const Dataset & dataset, const PlotSpec & spec)
{
    auto & layout = spec.layout;
    nlohmann::json axes = nlohmann::json::array();
    for (int a : layout.order) {
        auto & axis = axis_of(layout, a);
        auto spans = place_blocks(axis);
        nlohmann::json blocks = nlohmann::json::array();
        for (std::size_t i = 0; i < axis.blocks.size(); ++i) {
            auto & b = axis.blocks[i];
            if (b.frequency == 0 || b.purity() < Ratio(std::llround(layout.purity_threshold * 1e6), 1000000))
                continue;
            blocks.push_back({
                {"values", b.values},
                {"y0", spans[i].y0},
                {"y1", spans[i].y1},
                {"histogram", b.histogram},
                {"purity", b.purity_value()},
                {"dominant", b.dominant},
                {"frequency", b.frequency},
                {"role", to_string(b.role)},
            });
        }
        axes.push_back({{"attr", a}, {"name", dataset.attribute(a).name}, {"flipped", axis.flipped}, {"blocks", blocks}});
    }
    nlohmann::json lines = nlohmann::json::array();
    for (auto & l : lines_of(dataset, layout))
        lines.push_back({{"path", l.path}, {"weight", l.weight}, {"class", l.cls}});
    return {{"axes", axes}, {"lines", lines}};
}

std::string render_svg(const Dataset & dataset, const PlotSpec & spec)
{
    auto & layout = spec.layout;
    const double margin = 40, gap = 120, bar = 14;
    double width = spec.width > 0 ? spec.width : margin * 2 + gap * std::max<std::size_t>(layout.order.size() - 1, 1);
    double height = spec.height;
    double plot_h = height - 2 * margin;
    auto x_of = [&](std::size_t i) { return margin + gap * i; };
    auto y_of = [&](double y) { return margin + (1.0 - y) * plot_h; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(width) << "\" height=\""
       << fixed(height) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    auto lines = lines_of(dataset, layout);
    std::size_t heaviest = 1;
    for (auto & l : lines)
        heaviest = std::max(heaviest, l.weight);
    os << "<g fill=\"none\" stroke-opacity=\"0.35\">\n";
    for (auto & l : lines) {
        os << "<polyline stroke=\"" << color(spec, l.cls) << "\" stroke-width=\""
           << fixed(0.5 + 5.0 * l.weight / heaviest) << "\" points=\"";
        for (std::size_t i = 0; i < l.path.size(); ++i)
            os << (i ? " " : "") << fixed(x_of(i)) << ',' << fixed(y_of(l.path[i]));
        os << "\"/>\n";
    }
    os << "</g>\n";

    for (std::size_t i = 0; i < layout.order.size(); ++i) {
        int a = layout.order[i];
        auto & axis = axis_of(layout, a);
        auto spans = place_blocks(axis);
        os << "<g class=\"axis\" data-attr=\"" << a << "\">\n";
        os << "<line x1=\"" << fixed(x_of(i)) << "\" y1=\"" << fixed(y_of(0)) << "\" x2=\"" << fixed(x_of(i))
           << "\" y2=\"" << fixed(y_of(1)) << "\" stroke=\"black\"/>\n";
        for (std::size_t k = 0; k < axis.blocks.size(); ++k) {
            auto & b = axis.blocks[k];
            bool pure = b.frequency > 0 && ! (b.purity() < Ratio(std::llround(layout.purity_threshold * 1e6), 1000000));
            os << "<rect x=\"" << fixed(x_of(i) - bar / 2) << "\" y=\"" << fixed(y_of(spans[k].y1)) << "\" width=\""
               << fixed(bar) << "\" height=\"" << fixed((spans[k].y1 - spans[k].y0) * plot_h) << "\" fill=\""
               << (b.role == BlockRole::merged_non_dominant ? std::string("#bbbbbb") : color(spec, b.dominant))
               << "\" stroke=\"" << (pure && layout.purity_threshold > 0 ? "green" : "black") << "\"/>\n";
        }
        os << "<text x=\"" << fixed(x_of(i)) << "\" y=\"" << fixed(height - margin / 3)
           << "\" text-anchor=\"middle\" font-size=\"11\">X" << a << (axis.flipped ? "'" : "") << "</text>\n";
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

nlohmann::json layout_to_json(const AxisLayout & layout)
{
    nlohmann::json axes = nlohmann::json::array();
    for (int a : layout.order) {
        auto & axis = axis_of(layout, a);
        nlohmann::json blocks = nlohmann::json::array();
        for (auto & b : axis.blocks)
            blocks.push_back(b.values);
        axes.push_back({{"attr", a}, {"flipped", axis.flipped}, {"blocks", blocks}});
    }
    return {{"order", layout.order}, {"axes", axes}, {"small", layout.small_block_threshold},
        {"purity", layout.purity_threshold}};
}

}
