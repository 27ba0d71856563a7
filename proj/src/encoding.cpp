#include <srg/encoding.hpp>
#include <srg/errors.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>

namespace srg {

namespace {
    constexpr std::array<std::pair<EncodingKind, std::string_view>, 9> encoding_names{{
        {EncodingKind::label, "label"},
        {EncodingKind::one_hot, "one_hot"},
        {EncodingKind::ordinal, "ordinal"},
        {EncodingKind::key_group, "key_group"},
        {EncodingKind::interval_group, "interval_group"},
        {EncodingKind::frequency, "frequency"},
        {EncodingKind::mean_target, "mean_target"},
        {EncodingKind::probability_ratio, "probability_ratio"},
        {EncodingKind::james_stein, "james_stein"},
    }};
}

std::string_view to_string(EncodingKind kind)
{
    for (auto & [k, n] : encoding_names)
        if (k == kind)
            return n;
    return "label";
}

EncodingKind parse_encoding_kind(std::string_view text)
{
    for (auto & [k, n] : encoding_names)
        if (n == text)
            return k;
    throw ValidationError("unknown encoding '" + std::string(text) + "'");
}

std::string number_token(double v)
{
    if (v == 0)
        v = 0;
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

nlohmann::ordered_json scheme_to_json(int attribute, const EncodingScheme & s)
{
    nlohmann::ordered_json j;
    j["attribute"] = attribute;
    j["kind"] = to_string(s.kind);
    switch (s.kind) {
    case EncodingKind::label:
    case EncodingKind::ordinal:
        if (! s.order.empty())
            j["order"] = s.order;
        break;
    case EncodingKind::key_group:
        j["groups"] = s.groups;
        break;
    case EncodingKind::interval_group:
        j["start"] = s.start;
        j["width"] = s.width;
        break;
    case EncodingKind::probability_ratio:
        j["smoothing"] = s.smoothing;
        j["positive_class"] = s.positive_class;
        break;
    case EncodingKind::james_stein:
        j["shrinkage"] = s.shrinkage;
        if (s.weight)
            j["weight"] = *s.weight;
        j["positive_class"] = s.positive_class;
        break;
    case EncodingKind::mean_target:
        j["positive_class"] = s.positive_class;
        break;
    case EncodingKind::one_hot:
    case EncodingKind::frequency:
        break;
    }
    return j;
}

std::pair<int, EncodingScheme> scheme_from_json(const nlohmann::ordered_json & j)
{
    try {
        EncodingScheme s;
        int attribute = j.at("attribute").get<int>();
        s.kind = parse_encoding_kind(j.at("kind").get<std::string>());
        s.order = j.value("order", std::vector<std::string>{});
        if (j.contains("groups"))
            s.groups = j["groups"].get<std::map<std::string, int>>();
        s.start = j.value("start", 0.0);
        s.width = j.value("width", 1.0);
        s.smoothing = j.value("smoothing", 1.0);
        s.shrinkage = j.value("shrinkage", 10.0);
        if (j.contains("weight"))
            s.weight = j["weight"].get<double>();
        s.positive_class = j.value("positive_class", 1);
        return {attribute, s};
    }
    catch (const nlohmann::json::exception & e) {
        throw ValidationError(std::string("malformed encoding entry: ") + e.what());
    }
}

namespace {
    bool categorical(MeasurementKind k)
    {
        k = storage_kind(k);
        return k == MeasurementKind::nominal || k == MeasurementKind::ordinal || k == MeasurementKind::cyclical;
    }

    void check_legal(const AttributeSchema & attr, const EncodingScheme & s)
    {
        bool ok = true;
        switch (s.kind) {
        case EncodingKind::ordinal:
            ok = storage_kind(attr.kind) == MeasurementKind::ordinal;
            break;
        case EncodingKind::interval_group:
            ok = is_numeric(attr.kind);
            break;
        default:
            ok = categorical(attr.kind);
            break;
        }
        if (! ok)
            throw ValidationError(std::string(to_string(s.kind)) + " encoding is not allowed on "
                + std::string(to_string(attr.kind)) + " attribute x" + std::to_string(attr.index));
        if (s.kind == EncodingKind::interval_group && ! (s.width > 0))
            throw ValidationError("interval width must be positive");
        if (s.kind == EncodingKind::ordinal && s.order.empty())
            throw ValidationError("ordinal encoding needs an explicit value order");
        if (s.kind == EncodingKind::james_stein && s.weight && (*s.weight < 0 || *s.weight > 1))
            throw ValidationError("James-Stein weight must lie in [0,1]");
        if (s.smoothing < 0 || s.shrinkage < 0)
            throw ValidationError("smoothing and shrinkage must be non-negative");
    }

    // One derived attribute replacing `attribute`: new schema plus old code -> new code map.
    struct Recode {
        AttributeSchema schema;
        std::vector<Code> map; // indexed by old code
    };

    // Builds a numeric attribute whose codes rank the distinct values.
    Recode numeric_recode(const AttributeSchema & src, const std::vector<double> & value_of_code)
    {
        std::vector<std::pair<double, std::string>> distinct;
        for (std::size_t c = 1; c < value_of_code.size(); ++c)
            distinct.emplace_back(value_of_code[c], number_token(value_of_code[c]));
        std::sort(distinct.begin(), distinct.end());
        std::vector<std::string> tokens;
        for (auto & [v, t] : distinct)
            if (tokens.empty() || tokens.back() != t)
                tokens.push_back(t);
        Recode r;
        r.schema.name = src.name;
        r.schema.kind = MeasurementKind::ratio;
        r.schema.codebook = Codebook(tokens, OrderingPolicy::alphabetical);
        r.map.assign(value_of_code.size(), 0);
        for (std::size_t c = 1; c < value_of_code.size(); ++c)
            r.map[c] = r.schema.codebook.code(number_token(value_of_code[c]));
        return r;
    }

    struct Counts {
        std::vector<double> n, pos;
        double total = 0, positives = 0;
    };

    Counts count_values(const Dataset & d, int attribute, const EncodingScheme & s)
    {
        auto k = d.attribute(attribute).codebook.size();
        Counts c;
        c.n.assign(k + 1, 0);
        c.pos.assign(k + 1, 0);
        auto add = [&](std::size_t r) {
            if (r >= d.size())
                throw ValidationError("fit row " + std::to_string(r) + " is out of range");
            auto v = d.at(r, attribute);
            bool p = d.label(r) == s.positive_class;
            c.n[v] += 1;
            c.pos[v] += p;
            c.total += 1;
            c.positives += p;
        };
        if (s.fit_rows)
            for (auto r : *s.fit_rows)
                add(r);
        else
            for (std::size_t r = 0; r < d.size(); ++r)
                add(r);
        return c;
    }

    Recode recode_single(const Dataset & d, const AttributeSchema & src, const EncodingScheme & s)
    {
        auto & book = src.codebook;
        auto k = book.size();
        Recode r;
        r.map.assign(k + 1, 0);
        r.schema.name = src.name;
        r.schema.kind = src.kind;
        r.schema.extra_relations = src.extra_relations;

        switch (s.kind) {
        case EncodingKind::label:
        case EncodingKind::ordinal: {
            std::vector<std::string> order = s.order.empty() ? book.values() : s.order;
            std::set<std::string> listed(order.begin(), order.end());
            if (listed.size() != order.size())
                throw ValidationError("value order lists a value twice");
            for (auto & v : book.values())
                if (! listed.contains(v))
                    throw ValidationError("value order omits '" + v + "'");
            r.schema.codebook = Codebook(order, OrderingPolicy::explicit_order);
            for (Code c = 1; c <= static_cast<Code>(k); ++c)
                r.map[c] = r.schema.codebook.code(book.raw(c));
            return r;
        }
        case EncodingKind::key_group: {
            std::set<int> ids;
            for (Code c = 1; c <= static_cast<Code>(k); ++c) {
                auto it = s.groups.find(book.raw(c));
                if (it == s.groups.end())
                    throw ValidationError("key map has no group for '" + book.raw(c) + "'");
                ids.insert(it->second);
            }
            std::vector<std::string> tokens;
            for (auto id : ids)
                tokens.push_back(std::to_string(id));
            r.schema.codebook = Codebook(tokens, OrderingPolicy::explicit_order);
            for (Code c = 1; c <= static_cast<Code>(k); ++c)
                r.map[c] = r.schema.codebook.code(std::to_string(s.groups.at(book.raw(c))));
            return r;
        }
        case EncodingKind::interval_group: {
            std::vector<long> group(k + 1, 0);
            long top = 0;
            for (Code c = 1; c <= static_cast<Code>(k); ++c) {
                double v = src.numeric_value(c);
                if (std::isnan(v))
                    throw ValidationError("value '" + book.raw(c) + "' of x" + std::to_string(src.index)
                        + " is not numeric");
                group[c] = 1 + static_cast<long>(std::floor((v - s.start) / s.width));
                if (group[c] < 1)
                    throw ValidationError("value '" + book.raw(c) + "' lies below the interval start");
                top = std::max(top, group[c]);
            }
            std::vector<std::string> tokens;
            for (long g = 1; g <= top; ++g)
                tokens.push_back(std::to_string(g));
            r.schema.kind = MeasurementKind::ordinal;
            r.schema.codebook = Codebook(tokens, OrderingPolicy::explicit_order);
            for (Code c = 1; c <= static_cast<Code>(k); ++c)
                r.map[c] = static_cast<Code>(group[c]);
            return r;
        }
        default:
            break;
        }

        auto counts = count_values(d, src.index, s);
        std::vector<double> value(k + 1, 0);
        double global = counts.total > 0 ? counts.positives / counts.total : 0;
        for (Code c = 1; c <= static_cast<Code>(k); ++c) {
            double n = counts.n[c], pos = counts.pos[c], neg = n - pos;
            switch (s.kind) {
            case EncodingKind::frequency:
                value[c] = counts.total > 0 ? n / counts.total : 0;
                break;
            case EncodingKind::mean_target:
                value[c] = n > 0 ? pos / n : global;
                break;
            case EncodingKind::probability_ratio:
                if (neg + s.smoothing == 0)
                    throw NumericError("probability ratio for value '" + book.raw(c) + "' of x"
                        + std::to_string(src.index) + " divides by zero");
                value[c] = (pos + s.smoothing) / (neg + s.smoothing);
                break;
            case EncodingKind::james_stein: {
                double w = s.weight ? *s.weight : (n + s.shrinkage > 0 ? n / (n + s.shrinkage) : 0);
                double mean = n > 0 ? pos / n : global;
                value[c] = w * mean + (1 - w) * global;
                break;
            }
            default:
                break;
            }
        }
        return numeric_recode(src, value);
    }

    void reindex(std::vector<AttributeSchema> & attrs)
    {
        for (std::size_t i = 0; i < attrs.size(); ++i)
            attrs[i].index = static_cast<int>(i) + 1;
    }
}

EncodedDataset apply_encoding(const Dataset & dataset, int attribute, const EncodingScheme & scheme)
{
    auto & src = dataset.attribute(attribute);
    check_legal(src, scheme);
    int width = dataset.width();
    EncodedDataset out;

    if (scheme.kind == EncodingKind::one_hot) {
        int k = static_cast<int>(src.codebook.size());
        std::vector<AttributeSchema> attrs;
        for (int a = 1; a <= width; ++a) {
            if (a != attribute) {
                attrs.push_back(dataset.attribute(a));
                continue;
            }
            for (Code c = 1; c <= k; ++c) {
                AttributeSchema b;
                b.name = src.name + "=" + src.codebook.raw(c);
                b.kind = MeasurementKind::nominal;
                b.codebook = Codebook({"0", "1"}, OrderingPolicy::explicit_order);
                attrs.push_back(std::move(b));
            }
        }
        reindex(attrs);
        int new_width = width + k - 1;
        std::vector<Code> cells;
        cells.reserve(dataset.size() * new_width);
        for (std::size_t r = 0; r < dataset.size(); ++r)
            for (int a = 1; a <= width; ++a) {
                Code v = dataset.at(r, a);
                if (a != attribute)
                    cells.push_back(v);
                else
                    for (Code c = 1; c <= k; ++c)
                        cells.push_back(c == v ? 2 : 1);
            }
        for (Code c = 1; c <= k; ++c) {
            int idx = attribute + c - 1;
            out.provenance[idx] = {attribute, scheme.kind};
            bool seen[3] = {false, false, false};
            for (std::size_t r = 0; r < dataset.size(); ++r)
                seen[cells[r * new_width + idx - 1]] = true;
            if (! (seen[1] && seen[2]))
                out.uninformative.push_back(idx);
        }
        out.dataset = dataset.with_attributes(std::move(attrs), std::move(cells));
        return out;
    }

    auto recode = recode_single(dataset, src, scheme);
    std::vector<AttributeSchema> attrs(dataset.attributes().begin(), dataset.attributes().end());
    attrs[attribute - 1] = recode.schema;
    reindex(attrs);
    std::vector<Code> cells(dataset.cells().begin(), dataset.cells().end());
    std::set<Code> seen;
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        auto & cell = cells[r * width + attribute - 1];
        cell = recode.map[cell];
        seen.insert(cell);
    }
    out.provenance[attribute] = {attribute, scheme.kind};
    if (seen.size() <= 1)
        out.uninformative.push_back(attribute);
    out.dataset = dataset.with_attributes(std::move(attrs), std::move(cells));
    return out;
}

EncodedDataset apply_encodings(const Dataset & dataset, std::vector<std::pair<int, EncodingScheme>> schemes)
{
    std::stable_sort(schemes.begin(), schemes.end(), [](auto & a, auto & b) { return a.first > b.first; });
    for (std::size_t i = 1; i < schemes.size(); ++i)
        if (schemes[i].first == schemes[i - 1].first)
            throw ValidationError("two encodings target x" + std::to_string(schemes[i].first));
    EncodedDataset acc{dataset, {}, {}};
    for (auto & [attr, scheme] : schemes) {
        auto step = apply_encoding(acc.dataset, attr, scheme);
        int grown = step.dataset.width() - acc.dataset.width();
        std::map<int, Provenance> shifted;
        for (auto & [idx, p] : acc.provenance)
            shifted[idx > attr ? idx + grown : idx] = p;
        for (auto & [idx, p] : step.provenance)
            shifted[idx] = p;
        std::vector<int> flags;
        for (auto idx : acc.uninformative)
            flags.push_back(idx > attr ? idx + grown : idx);
        flags.insert(flags.end(), step.uninformative.begin(), step.uninformative.end());
        std::sort(flags.begin(), flags.end());
        acc = EncodedDataset{std::move(step.dataset), std::move(shifted), std::move(flags)};
    }
    return acc;
}

Dataset drop_attributes(const Dataset & dataset, std::vector<int> drop)
{
    std::sort(drop.begin(), drop.end());
    std::vector<int> keep;
    for (int a = 1; a <= dataset.width(); ++a)
        if (! std::binary_search(drop.begin(), drop.end(), a))
            keep.push_back(a);
    if (keep.empty())
        throw ValidationError("cannot drop every attribute");
    std::vector<AttributeSchema> attrs;
    for (auto a : keep)
        attrs.push_back(dataset.attribute(a));
    reindex(attrs);
    std::vector<Code> cells;
    cells.reserve(dataset.size() * keep.size());
    for (std::size_t r = 0; r < dataset.size(); ++r)
        for (auto a : keep)
            cells.push_back(dataset.at(r, a));
    return dataset.with_attributes(std::move(attrs), std::move(cells));
}

}
