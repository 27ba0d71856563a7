#include <srg/blocks.hpp>
#include <srg/errors.hpp>

#include <algorithm>
#include <cmath>

namespace srg {

std::string_view to_string(BlockRole role)
{
    switch (role) {
    case BlockRole::normal:
        return "normal";
    case BlockRole::merged_small:
        return "merged-small";
    case BlockRole::merged_non_dominant:
        return "merged-non-dominant";
    }
    return "normal";
}

Ratio Block::purity() const
{
    if (frequency == 0)
        return {0, 1};
    return {static_cast<std::int64_t>(histogram[dominant - 1]), static_cast<std::int64_t>(frequency)};
}

namespace {
    void check_threshold(double t, const char * what)
    {
        if (! (t >= 0.0 && t <= 1.0))
            throw ValidationError(std::string(what) + " must be in [0,1]");
    }

    Code dominant_of(const std::vector<std::size_t> & histogram)
    {
        Code best = 0;
        std::size_t count = 0;
        for (std::size_t c = 0; c < histogram.size(); ++c)
            if (histogram[c] > count) {
                count = histogram[c];
                best = static_cast<Code>(c + 1);
            }
        return best;
    }

    Block merge(const std::vector<Block> & parts, BlockRole role)
    {
        Block b;
        b.attribute = parts.front().attribute;
        b.role = role;
        b.histogram.assign(parts.front().histogram.size(), 0);
        for (auto & p : parts) {
            b.frequency += p.frequency;
            for (std::size_t c = 0; c < p.histogram.size(); ++c)
                b.histogram[c] += p.histogram[c];
            b.members.insert(b.members.end(), p.members.begin(), p.members.end());
            b.values.insert(b.values.end(), p.values.begin(), p.values.end());
        }
        std::sort(b.values.begin(), b.values.end());
        std::sort(b.members.begin(), b.members.end(), [](auto & x, auto & y) { return x.value < y.value; });
        b.dominant = dominant_of(b.histogram);
        return b;
    }

    bool below(std::size_t num, std::size_t den, double threshold)
    {
        // num/den < threshold, in millionths to keep boundaries exact.
        return static_cast<long double>(num) * 1000000 < std::llround(threshold * 1e6) * static_cast<long double>(den);
    }
}

std::vector<Block> reference_blocks(const Dataset & dataset, int attribute, std::optional<int> reference,
    const BlockOptions & options)
{
    check_threshold(options.small_threshold, "small block threshold");
    check_threshold(options.merge_below_purity, "purity threshold");
    const auto & attr = dataset.attribute(attribute);
    std::size_t ref_size = reference ? dataset.attribute(*reference).codebook.size()
                                     : dataset.class_schema().codebook.size();
    std::vector<std::vector<std::size_t>> hist(attr.codebook.size() + 1, std::vector<std::size_t>(ref_size, 0));
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        auto ref = reference ? dataset.at(r, *reference) : dataset.label(r);
        ++hist[dataset.at(r, attribute)][ref - 1];
    }

    std::vector<Block> blocks;
    for (Code v = 1; v <= static_cast<Code>(attr.codebook.size()); ++v) {
        std::size_t f = 0;
        for (auto n : hist[v])
            f += n;
        if (f == 0)
            continue;
        Block b;
        b.attribute = attribute;
        b.values = {v};
        b.frequency = f;
        b.histogram = hist[v];
        b.members = {{v, hist[v]}};
        b.dominant = dominant_of(b.histogram);
        blocks.push_back(std::move(b));
    }
    std::stable_sort(blocks.begin(), blocks.end(), [](auto & a, auto & b) { return a.frequency > b.frequency; });

    std::vector<Block> kept, small, mixed;
    for (auto & b : blocks) {
        if (options.small_threshold > 0 && below(b.frequency, dataset.size(), options.small_threshold))
            small.push_back(b);
        else if (options.merge_below_purity > 0 && below(b.histogram[b.dominant - 1], b.frequency, options.merge_below_purity))
            mixed.push_back(b);
        else
            kept.push_back(b);
    }
    if (! mixed.empty())
        kept.push_back(merge(mixed, BlockRole::merged_non_dominant));
    if (! small.empty())
        kept.push_back(merge(small, BlockRole::merged_small));
    return kept;
}

std::vector<Block> frequency_blocks(const Dataset & dataset, int attribute)
{
    return reference_blocks(dataset, attribute);
}

std::vector<Block> purity_filter(const std::vector<Block> & blocks, double min_purity)
{
    check_threshold(min_purity, "purity threshold");
    std::vector<Block> out;
    for (auto & b : blocks)
        if (b.frequency > 0 && ! below(b.histogram[b.dominant - 1], b.frequency, min_purity))
            out.push_back(b);
    return out;
}

std::vector<std::string> linguistic_description(const Dataset & dataset, double purity_threshold, double size_threshold)
{
    check_threshold(purity_threshold, "purity threshold");
    check_threshold(size_threshold, "size threshold");
    std::vector<std::string> lines;
    for (int a = 1; a <= dataset.width(); ++a) {
        auto blocks = reference_blocks(dataset, a);
        std::vector<std::string> total, pure;
        bool small = false;
        for (auto & b : blocks) {
            auto code = std::to_string(b.values.front());
            auto share = Ratio(static_cast<std::int64_t>(b.frequency), static_cast<std::int64_t>(dataset.size()));
            auto prefix = "X" + std::to_string(a) + ", block, " + code;
            if (! below(b.frequency, dataset.size(), purity_threshold)) {
                total.push_back(prefix + " has a total frequency of " + percent_string(share, 0));
                continue;
            }
            if (below(b.frequency, dataset.size(), size_threshold)) {
                small = true;
                continue;
            }
            if (! below(b.histogram[b.dominant - 1], b.frequency, purity_threshold))
                pure.push_back(prefix + " has a purity of " + percent_string(b.purity(), 0));
        }
        lines.insert(lines.end(), total.begin(), total.end());
        if (small)
            lines.push_back("X" + std::to_string(a) + " has a small frequency block.");
        lines.insert(lines.end(), pure.begin(), pure.end());
    }
    return lines;
}

std::map<std::tuple<int, Code, ClassId>, std::size_t> triples_from_blocks(const std::vector<std::vector<Block>> & axes)
{
    std::map<std::tuple<int, Code, ClassId>, std::size_t> out;
    for (auto & axis : axes)
        for (auto & b : axis)
            for (auto & m : b.members)
                for (std::size_t c = 0; c < m.histogram.size(); ++c)
                    if (m.histogram[c])
                        out[{b.attribute, m.value, static_cast<ClassId>(c + 1)}] += m.histogram[c];
    return out;
}

std::map<std::tuple<int, Code, ClassId>, std::size_t> triples_from_dataset(const Dataset & dataset)
{
    std::map<std::tuple<int, Code, ClassId>, std::size_t> out;
    for (std::size_t r = 0; r < dataset.size(); ++r)
        for (int a = 1; a <= dataset.width(); ++a)
            ++out[{a, dataset.at(r, a), dataset.label(r)}];
    return out;
}

nlohmann::json block_to_json(const Block & b)
{
    nlohmann::json members = nlohmann::json::array();
    for (auto & m : b.members)
        members.push_back({{"value", m.value}, {"histogram", m.histogram}});
    return {
        {"attr", b.attribute},
        {"values", b.values},
        {"frequency", b.frequency},
        {"histogram", b.histogram},
        {"members", members},
        {"dominant", b.dominant},
        {"purity", b.purity_value()},
        {"role", to_string(b.role)},
    };
}

}
