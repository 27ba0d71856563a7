#pragma once

#include <srg/codebook.hpp>
#include <srg/measurement.hpp>

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace srg {

struct AttributeSchema {
    std::string name;
    int index = 0;
    MeasurementKind kind = MeasurementKind::nominal;
    Codebook codebook;
    // Relations allowed on top of the type whitelist, for semi-ordered nominal data.
    std::set<Relation> extra_relations;

    // Numeric reading of a code's raw token; NaN when the token is not a number.
    double numeric_value(Code code) const;

    friend bool operator==(const AttributeSchema &, const AttributeSchema &) = default;
};

struct ClassSchema {
    std::string name = "class";
    // 1-based column of the class in the source file; 0 means last.
    int column = 0;
    Codebook codebook;

    friend bool operator==(const ClassSchema &, const ClassSchema &) = default;
};

struct Schema {
    std::vector<AttributeSchema> attributes;
    ClassSchema cls;
    std::string missing = "?";
    // Encoding scheme entries carried along opaquely; see encoding.hpp.
    nlohmann::ordered_json encodings = nlohmann::ordered_json::array();
};

nlohmann::ordered_json schema_to_json(const Schema & schema);
Schema schema_from_json(const nlohmann::ordered_json & doc);
Schema read_schema(const std::filesystem::path & path);
void write_schema(const Schema & schema, const std::filesystem::path & path);
std::string schema_text(const Schema & schema);

// Immutable table of integer-coded cases. Attribute indices are 1-based.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<AttributeSchema> attributes, ClassSchema cls, std::vector<Code> cells,
        std::vector<ClassId> labels);

    std::size_t size() const { return labels_.size(); }
    int width() const { return static_cast<int>(attributes_.size()); }

    std::span<const Code> row(std::size_t r) const
    {
        return {cells_.data() + r * attributes_.size(), attributes_.size()};
    }
    Code at(std::size_t r, int attribute) const { return cells_[r * attributes_.size() + attribute - 1]; }
    ClassId label(std::size_t r) const { return labels_[r]; }
    std::span<const ClassId> labels() const { return labels_; }
    std::span<const Code> cells() const { return cells_; }
    std::vector<Code> column(int attribute) const;

    const AttributeSchema & attribute(int index) const;
    std::span<const AttributeSchema> attributes() const { return attributes_; }
    const ClassSchema & class_schema() const { return class_; }
    std::vector<ClassId> class_ids() const;
    std::string class_name(ClassId id) const;
    std::size_t class_count(ClassId id) const;
    ClassId other_class(ClassId id) const;

    Schema schema() const;

    Dataset subset(std::span<const std::size_t> rows) const;
    Dataset with_attributes(std::vector<AttributeSchema> attributes, std::vector<Code> cells) const;

    // Canonical byte serialization (schema followed by codes); equal datasets give equal bytes.
    std::string serialize() const;

private:
    std::vector<AttributeSchema> attributes_;
    ClassSchema class_;
    std::vector<Code> cells_;
    std::vector<ClassId> labels_;
};

struct CsvOptions {
    std::optional<Schema> schema;
    // 1-based class column; 0 means last. A schema's class column wins when set.
    int class_column = 0;
    OrderingPolicy policy = OrderingPolicy::alphabetical;
    char delimiter = ',';
    std::string missing = "?";
    bool header = false;
};

Dataset load_csv(const std::filesystem::path & path, const CsvOptions & options = {});
Dataset parse_csv(std::string_view text, const CsvOptions & options = {});
std::string csv_text(const Dataset & dataset);
void write_csv(const Dataset & dataset, const std::filesystem::path & path);

}
