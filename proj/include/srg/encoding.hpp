#pragma once

#include <srg/dataset.hpp>

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace srg {

enum class EncodingKind {
    label,
    one_hot,
    ordinal,
    key_group,
    interval_group,
    frequency,
    mean_target,
    probability_ratio,
    james_stein,
};

std::string_view to_string(EncodingKind kind);
EncodingKind parse_encoding_kind(std::string_view text);

struct EncodingScheme {
    EncodingKind kind = EncodingKind::label;
    // label: optional new value order; ordinal: required order, lowest first.
    std::vector<std::string> order;
    // key_group: raw value -> group id.
    std::map<std::string, int> groups;
    // interval_group: value v goes to group 1 + floor((v - start) / width).
    double start = 0;
    double width = 1;
    // probability_ratio: additive smoothing on both class counts.
    double smoothing = 1;
    // james_stein: w = n_v / (n_v + shrinkage) unless `weight` pins it.
    double shrinkage = 10;
    std::optional<double> weight;
    // Class whose indicator the statistics encoders average.
    ClassId positive_class = 1;
    // Rows used to fit statistics (training fold); all rows when absent.
    std::optional<std::vector<std::size_t>> fit_rows;
};

nlohmann::ordered_json scheme_to_json(int attribute, const EncodingScheme & scheme);
std::pair<int, EncodingScheme> scheme_from_json(const nlohmann::ordered_json & doc);

struct Provenance {
    int source = 0;
    EncodingKind kind = EncodingKind::label;
    friend bool operator==(const Provenance &, const Provenance &) = default;
};

struct EncodedDataset {
    Dataset dataset;
    // Derived attribute index -> where it came from.
    std::map<int, Provenance> provenance;
    // Derived attributes that take a single value on every case.
    std::vector<int> uninformative;
};

// Throws ValidationError when the scheme does not suit the attribute's type
// and NumericError on a zero denominator.
EncodedDataset apply_encoding(const Dataset & dataset, int attribute, const EncodingScheme & scheme);

// Applies several schemes, highest attribute first so indices stay meaningful.
EncodedDataset apply_encodings(const Dataset & dataset, std::vector<std::pair<int, EncodingScheme>> schemes);

Dataset drop_attributes(const Dataset & dataset, std::vector<int> attributes);

// Shortest text that reads back as the same double.
std::string number_token(double v);

}
