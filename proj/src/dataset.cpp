#include <srg/dataset.hpp>
#include <srg/errors.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace srg {

double AttributeSchema::numeric_value(Code code) const
{
    auto & raw = codebook.raw(code);
    double v = 0;
    auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec != std::errc{} || ptr != raw.data() + raw.size() || raw.empty())
        return std::nan("");
    return v;
}

nlohmann::ordered_json schema_to_json(const Schema & schema)
{
    nlohmann::ordered_json doc;
    auto & attrs = doc["attributes"] = nlohmann::ordered_json::array();
    for (auto & a : schema.attributes) {
        nlohmann::ordered_json j;
        j["name"] = a.name;
        j["index"] = a.index;
        j["mtype"] = to_string(a.kind);
        j["policy"] = to_string(a.codebook.policy());
        j["codebook"] = a.codebook.values();
        if (! a.extra_relations.empty()) {
            auto & rel = j["relations"] = nlohmann::ordered_json::array();
            for (auto r : a.extra_relations)
                rel.push_back(to_string(r));
        }
        attrs.push_back(std::move(j));
    }
    auto & c = doc["class"];
    c["name"] = schema.cls.name;
    c["column"] = schema.cls.column;
    c["policy"] = to_string(schema.cls.codebook.policy());
    c["codebook"] = schema.cls.codebook.values();
    if (schema.missing != "?")
        doc["missing"] = schema.missing;
    if (! schema.encodings.empty())
        doc["encodings"] = schema.encodings;
    return doc;
}

Schema schema_from_json(const nlohmann::ordered_json & doc)
{
    try {
        Schema schema;
        int expected = 1;
        for (auto & j : doc.at("attributes")) {
            AttributeSchema a;
            a.name = j.at("name").get<std::string>();
            a.index = j.value("index", expected);
            if (a.index != expected)
                throw ValidationError("attribute indices must be 1..n in order; found " + std::to_string(a.index));
            a.kind = parse_measurement(j.value("mtype", std::string("nominal")));
            auto policy = parse_policy(j.value("policy", std::string("explicit")));
            a.codebook = Codebook(j.value("codebook", std::vector<std::string>{}), policy);
            if (j.contains("relations"))
                for (auto & r : j["relations"])
                    a.extra_relations.insert(parse_relation(r.get<std::string>()));
            schema.attributes.push_back(std::move(a));
            ++expected;
        }
        if (doc.contains("class")) {
            auto & c = doc["class"];
            schema.cls.name = c.value("name", std::string("class"));
            schema.cls.column = c.value("column", 0);
            schema.cls.codebook = Codebook(c.value("codebook", std::vector<std::string>{}),
                parse_policy(c.value("policy", std::string("explicit"))));
        }
        schema.missing = doc.value("missing", std::string("?"));
        if (doc.contains("encodings"))
            schema.encodings = doc["encodings"];
        return schema;
    }
    catch (const nlohmann::json::exception & e) {
        throw ValidationError(std::string("malformed schema: ") + e.what());
    }
}

std::string schema_text(const Schema & schema) { return schema_to_json(schema).dump(2) + "\n"; }

Schema read_schema(const std::filesystem::path & path)
{
    std::ifstream in(path);
    if (! in)
        throw IoError("cannot open schema " + path.string());
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(in);
    }
    catch (const nlohmann::json::parse_error & e) {
        throw ValidationError("schema " + path.string() + " is not valid JSON: " + e.what());
    }
    return schema_from_json(doc);
}

void write_schema(const Schema & schema, const std::filesystem::path & path)
{
    std::ofstream out(path, std::ios::binary);
    if (! out)
        throw IoError("cannot write schema " + path.string());
    out << schema_text(schema);
}

Dataset::Dataset(std::vector<AttributeSchema> attributes, ClassSchema cls, std::vector<Code> cells,
    std::vector<ClassId> labels) :
    attributes_(std::move(attributes)),
    class_(std::move(cls)),
    cells_(std::move(cells)),
    labels_(std::move(labels))
{
    if (cells_.size() != labels_.size() * attributes_.size())
        throw StructuralError("cell count does not match rows x attributes");
    for (std::size_t i = 0; i < attributes_.size(); ++i)
        if (attributes_[i].index != static_cast<int>(i) + 1)
            throw ValidationError("attribute index mismatch at position " + std::to_string(i + 1));
    for (std::size_t r = 0; r < labels_.size(); ++r) {
        if (! class_.codebook.contains(labels_[r]))
            throw ValidationError("class id out of range in case " + std::to_string(r + 1));
        for (std::size_t a = 0; a < attributes_.size(); ++a)
            if (! attributes_[a].codebook.contains(cells_[r * attributes_.size() + a]))
                throw ValidationError("code out of range for x" + std::to_string(a + 1) + " in case "
                    + std::to_string(r + 1));
    }
}

std::vector<Code> Dataset::column(int attribute) const
{
    std::vector<Code> out(size());
    for (std::size_t r = 0; r < size(); ++r)
        out[r] = at(r, attribute);
    return out;
}

const AttributeSchema & Dataset::attribute(int index) const
{
    if (index < 1 || index > width())
        throw ValidationError("unknown attribute index " + std::to_string(index));
    return attributes_[index - 1];
}

std::vector<ClassId> Dataset::class_ids() const
{
    std::vector<ClassId> ids;
    for (Code c = 1; c <= static_cast<Code>(class_.codebook.size()); ++c)
        ids.push_back(c);
    return ids;
}

std::string Dataset::class_name(ClassId id) const { return class_.codebook.raw(id); }

std::size_t Dataset::class_count(ClassId id) const
{
    std::size_t n = 0;
    for (auto l : labels_)
        n += (l == id);
    return n;
}

ClassId Dataset::other_class(ClassId id) const
{
    if (class_.codebook.size() != 2)
        throw ValidationError("opposite class is only defined for two-class data");
    return id == 1 ? 2 : 1;
}

Schema Dataset::schema() const
{
    Schema s;
    s.attributes = attributes_;
    s.cls = class_;
    return s;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const
{
    std::vector<Code> cells;
    std::vector<ClassId> labels;
    cells.reserve(rows.size() * attributes_.size());
    for (auto r : rows) {
        auto src = row(r);
        cells.insert(cells.end(), src.begin(), src.end());
        labels.push_back(labels_[r]);
    }
    return Dataset(attributes_, class_, std::move(cells), std::move(labels));
}

Dataset Dataset::with_attributes(std::vector<AttributeSchema> attributes, std::vector<Code> cells) const
{
    return Dataset(std::move(attributes), class_, std::move(cells), labels_);
}

std::string Dataset::serialize() const
{
    std::ostringstream os;
    os << schema_text(schema());
    for (std::size_t r = 0; r < size(); ++r) {
        for (auto c : row(r))
            os << c << ',';
        os << labels_[r] << '\n';
    }
    return os.str();
}

namespace {
    std::string_view trim(std::string_view s)
    {
        while (! s.empty() && (s.front() == ' ' || s.front() == '\t'))
            s.remove_prefix(1);
        while (! s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
            s.remove_suffix(1);
        return s;
    }

    std::vector<std::string> split(std::string_view line, char delim)
    {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (true) {
            auto pos = line.find(delim, start);
            out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
            if (pos == std::string_view::npos)
                break;
            start = pos + 1;
        }
        return out;
    }

    // Codebook for one column: fixed when the schema lists values, built from data otherwise.
    Codebook resolve_codebook(const std::vector<std::string> & tokens, const Codebook * declared,
        OrderingPolicy fallback, const std::string & missing, const std::string & what,
        const std::vector<long> & line_numbers, bool allow_missing)
    {
        if (declared && ! declared->empty()) {
            Codebook book = *declared;
            for (std::size_t i = 0; i < tokens.size(); ++i) {
                if (book.find(tokens[i]))
                    continue;
                if (allow_missing && tokens[i] == missing) {
                    book.add(missing);
                    continue;
                }
                throw ValidationError("unknown " + what + " token '" + tokens[i] + "' at row "
                    + std::to_string(line_numbers[i]));
            }
            return book;
        }
        std::vector<std::string> order;
        std::set<std::string> seen;
        for (auto & t : tokens)
            if (seen.insert(t).second)
                order.push_back(t);
        auto policy = declared ? declared->policy() : fallback;
        return Codebook::from_observed(order, policy, missing);
    }
}

Dataset parse_csv(std::string_view text, const CsvOptions & options)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<long> line_numbers;
    std::size_t width = 0;
    long line_no = 0;
    bool skipped_header = ! options.header;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        auto line = trim(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        start = end == std::string_view::npos ? text.size() : end + 1;
        ++line_no;
        if (line.empty())
            continue;
        if (! skipped_header) {
            skipped_header = true;
            continue;
        }
        auto fields = split(line, options.delimiter);
        if (rows.empty())
            width = fields.size();
        else if (fields.size() != width)
            throw StructuralError("expected " + std::to_string(width) + " fields, found " + std::to_string(fields.size()),
                line_no);
        rows.push_back(std::move(fields));
        line_numbers.push_back(line_no);
    }
    if (rows.empty())
        throw StructuralError("no cases in input");
    if (width < 2)
        throw StructuralError("need at least one attribute and a class column", line_numbers.front());

    const Schema * schema = options.schema ? &*options.schema : nullptr;
    int class_column = options.class_column;
    if (schema && schema->cls.column > 0)
        class_column = schema->cls.column;
    if (class_column <= 0)
        class_column = static_cast<int>(width);
    if (class_column > static_cast<int>(width))
        throw StructuralError("class column " + std::to_string(class_column) + " is beyond the row width");
    std::size_t cc = class_column - 1;
    std::size_t n_attrs = width - 1;
    if (schema && schema->attributes.size() != n_attrs)
        throw StructuralError("schema lists " + std::to_string(schema->attributes.size()) + " attributes, file has "
            + std::to_string(n_attrs));
    std::string missing = schema ? schema->missing : options.missing;

    auto column_of = [&](std::size_t a) { return a < cc ? a : a + 1; };

    std::vector<AttributeSchema> attributes(n_attrs);
    std::vector<Code> cells(rows.size() * n_attrs);
    std::vector<std::string> tokens(rows.size());
    for (std::size_t a = 0; a < n_attrs; ++a) {
        for (std::size_t r = 0; r < rows.size(); ++r)
            tokens[r] = rows[r][column_of(a)];
        auto & attr = attributes[a];
        if (schema) {
            attr = schema->attributes[a];
            attr.kind = storage_kind(attr.kind);
        }
        else {
            attr.name = "x" + std::to_string(a + 1);
            attr.index = static_cast<int>(a) + 1;
        }
        attr.codebook = resolve_codebook(tokens, schema ? &schema->attributes[a].codebook : nullptr, options.policy,
            missing, "value for x" + std::to_string(a + 1), line_numbers, true);
        for (std::size_t r = 0; r < rows.size(); ++r)
            cells[r * n_attrs + a] = attr.codebook.code(tokens[r]);
    }

    ClassSchema cls;
    if (schema)
        cls = schema->cls;
    cls.column = class_column;
    for (std::size_t r = 0; r < rows.size(); ++r)
        tokens[r] = rows[r][cc];
    cls.codebook = resolve_codebook(tokens, schema ? &schema->cls.codebook : nullptr, options.policy, missing,
        "class", line_numbers, false);
    std::vector<ClassId> labels(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        labels[r] = cls.codebook.code(tokens[r]);

    return Dataset(std::move(attributes), std::move(cls), std::move(cells), std::move(labels));
}

Dataset load_csv(const std::filesystem::path & path, const CsvOptions & options)
{
    std::ifstream in(path, std::ios::binary);
    if (! in)
        throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), options);
}

std::string csv_text(const Dataset & dataset)
{
    std::ostringstream out;
    int width = dataset.width() + 1;
    int cc = dataset.class_schema().column > 0 ? dataset.class_schema().column : width;
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        int a = 1;
        for (int col = 1; col <= width; ++col) {
            if (col > 1)
                out << ',';
            if (col == cc)
                out << dataset.class_name(dataset.label(r));
            else {
                out << dataset.attribute(a).codebook.raw(dataset.at(r, a));
                ++a;
            }
        }
        out << '\n';
    }
    return out.str();
}

void write_csv(const Dataset & dataset, const std::filesystem::path & path)
{
    std::ofstream out(path, std::ios::binary);
    if (! out || ! (out << csv_text(dataset)))
        throw IoError("cannot write " + path.string());
}

}
