#include <srg/errors.hpp>
#include <srg/grouping.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace srg {

std::string_view to_string(GroupingStrategy::Kind kind)
{
    switch (kind) {
    case GroupingStrategy::Kind::sequential:
        return "sequential";
    case GroupingStrategy::Kind::random:
        return "random";
    case GroupingStrategy::Kind::most_frequent:
        return "most_frequent";
    case GroupingStrategy::Kind::expert:
        return "expert";
    case GroupingStrategy::Kind::prior_attributes:
        return "prior_attributes";
    }
    return "sequential";
}

std::size_t uniform_index(std::mt19937_64 & rng, std::size_t n)
{
    // Rejection sampling keeps the draw unbiased.
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do
        x = rng();
    while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

std::vector<AttributeGroup> chunk(const std::vector<int> & attributes, int size)
{
    if (size < 1)
        throw ValidationError("group size must be positive");
    std::vector<AttributeGroup> out;
    for (std::size_t i = 0; i < attributes.size(); i += size) {
        AttributeGroup g(attributes.begin() + i, attributes.begin() + std::min(attributes.size(), i + size));
        if (static_cast<int>(g.size()) < size && ! out.empty())
            out.back().insert(out.back().end(), g.begin(), g.end());
        else
            out.push_back(std::move(g));
    }
    return out;
}

namespace {
    void check_groups(const std::vector<AttributeGroup> & groups, int n_attributes)
    {
        if (groups.empty())
            throw ValidationError("no attribute groups");
        for (auto & g : groups) {
            if (g.empty())
                throw ValidationError("empty attribute group");
            std::set<int> seen;
            for (auto a : g) {
                if (a < 1 || a > n_attributes)
                    throw ValidationError("group references unknown attribute x" + std::to_string(a));
                if (! seen.insert(a).second)
                    throw ValidationError("group lists x" + std::to_string(a) + " twice");
            }
        }
    }
}

std::vector<AttributeGroup> form_groups(const GroupingStrategy & s, int n_attributes)
{
    std::vector<AttributeGroup> groups;
    switch (s.kind) {
    case GroupingStrategy::Kind::sequential: {
        std::vector<int> all(n_attributes);
        for (int i = 0; i < n_attributes; ++i)
            all[i] = i + 1;
        groups = chunk(all, s.size);
        break;
    }
    case GroupingStrategy::Kind::random: {
        if (s.size > n_attributes || s.size < 1 || s.count < 1)
            throw ValidationError("random grouping needs 1 <= size <= attribute count and count >= 1");
        std::mt19937_64 rng(s.seed);
        for (int g = 0; g < s.count; ++g) {
            std::vector<int> pool(n_attributes);
            for (int i = 0; i < n_attributes; ++i)
                pool[i] = i + 1;
            // Partial Fisher-Yates: the first `size` slots are the draw.
            for (int i = 0; i < s.size; ++i)
                std::swap(pool[i], pool[i + uniform_index(rng, n_attributes - i)]);
            AttributeGroup group(pool.begin(), pool.begin() + s.size);
            std::sort(group.begin(), group.end());
            groups.push_back(std::move(group));
        }
        break;
    }
    case GroupingStrategy::Kind::expert:
        groups = s.groups;
        break;
    case GroupingStrategy::Kind::prior_attributes:
    case GroupingStrategy::Kind::most_frequent:
        groups = s.groups.empty() ? chunk(s.attributes, s.size) : s.groups;
        break;
    }
    check_groups(groups, n_attributes);
    return groups;
}

std::vector<AttributeGroup> parse_group_file(const std::string & text)
{
    std::vector<AttributeGroup> groups;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        AttributeGroup g;
        std::string tok;
        while (fields >> tok) {
            if (! tok.empty() && (tok[0] == 'x' || tok[0] == 'X'))
                tok.erase(0, 1);
            try {
                std::size_t used = 0;
                g.push_back(std::stoi(tok, &used));
                if (used != tok.size())
                    throw std::invalid_argument(tok);
            }
            catch (const std::logic_error &) {
                throw ValidationError("group file entry '" + tok + "' is not an attribute index");
            }
        }
        if (! g.empty())
            groups.push_back(std::move(g));
    }
    return groups;
}

std::vector<AttributeGroup> read_group_file(const std::filesystem::path & path)
{
    std::ifstream in(path);
    if (! in)
        throw IoError("cannot open group file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_group_file(buf.str());
}

namespace {
    std::vector<int> int_list(const std::string & text)
    {
        auto groups = parse_group_file(text);
        std::vector<int> out;
        for (auto & g : groups)
            out.insert(out.end(), g.begin(), g.end());
        return out;
    }

    int to_int(const std::string & s)
    {
        try {
            return std::stoi(s);
        }
        catch (const std::logic_error &) {
            throw ValidationError("expected an integer, got '" + s + "'");
        }
    }
}

GroupingStrategy parse_grouping(const std::string & text, std::uint64_t seed)
{
    GroupingStrategy s;
    s.seed = seed;
    auto colon = text.find(':');
    std::string kind = text.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "sequential") {
        s.kind = GroupingStrategy::Kind::sequential;
        s.size = arg.empty() ? 3 : to_int(arg);
    }
    else if (kind == "random") {
        s.kind = GroupingStrategy::Kind::random;
        auto x = arg.find('x');
        if (x == std::string::npos)
            throw ValidationError("random grouping is written random:<count>x<size>");
        s.count = to_int(arg.substr(0, x));
        s.size = to_int(arg.substr(x + 1));
    }
    else if (kind == "groups") {
        s.kind = GroupingStrategy::Kind::expert;
        std::string lines = arg;
        std::replace(lines.begin(), lines.end(), ';', '\n');
        s.groups = parse_group_file(lines);
    }
    else if (kind == "expert") {
        s.kind = GroupingStrategy::Kind::expert;
        s.groups = read_group_file(arg);
    }
    else if (kind == "prior") {
        s.kind = GroupingStrategy::Kind::prior_attributes;
        auto slash = arg.find('/');
        s.attributes = int_list(arg.substr(0, slash));
        s.size = slash == std::string::npos ? 3 : to_int(arg.substr(slash + 1));
    }
    else if (kind == "most_frequent") {
        s.kind = GroupingStrategy::Kind::most_frequent;
        auto slash = arg.find('/');
        if (! arg.empty())
            s.threshold = std::stod(arg.substr(0, slash));
        s.size = slash == std::string::npos ? 4 : to_int(arg.substr(slash + 1));
    }
    else
        throw ValidationError("unknown grouping '" + text + "'");
    return s;
}

nlohmann::json grouping_to_json(const GroupingStrategy & s)
{
    nlohmann::json j;
    j["kind"] = to_string(s.kind);
    j["size"] = s.size;
    if (s.kind == GroupingStrategy::Kind::random) {
        j["count"] = s.count;
        j["seed"] = s.seed;
    }
    if (! s.groups.empty())
        j["groups"] = s.groups;
    if (! s.attributes.empty())
        j["attributes"] = s.attributes;
    if (s.kind == GroupingStrategy::Kind::most_frequent)
        j["threshold"] = s.threshold;
    return j;
}

GroupingStrategy grouping_from_json(const nlohmann::json & j)
{
    try {
        GroupingStrategy s;
        auto kind = j.value("kind", std::string("sequential"));
        if (kind == "sequential")
            s.kind = GroupingStrategy::Kind::sequential;
        else if (kind == "random")
            s.kind = GroupingStrategy::Kind::random;
        else if (kind == "most_frequent")
            s.kind = GroupingStrategy::Kind::most_frequent;
        else if (kind == "expert")
            s.kind = GroupingStrategy::Kind::expert;
        else if (kind == "prior_attributes")
            s.kind = GroupingStrategy::Kind::prior_attributes;
        else
            throw ValidationError("unknown grouping kind '" + kind + "'");
        s.size = j.value("size", s.kind == GroupingStrategy::Kind::most_frequent ? 4 : 3);
        s.count = j.value("count", 30);
        s.seed = j.value("seed", std::uint64_t{1});
        s.groups = j.value("groups", std::vector<AttributeGroup>{});
        s.attributes = j.value("attributes", std::vector<int>{});
        s.threshold = j.value("threshold", 0.5);
        if (j.contains("file"))
            s.groups = read_group_file(j["file"].get<std::string>());
        return s;
    }
    catch (const nlohmann::json::exception & e) {
        throw ValidationError(std::string("malformed grouping: ") + e.what());
    }
}

}
