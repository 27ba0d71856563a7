#pragma once

#include <srg/dataset.hpp>
#include <srg/errors.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace test_support {

inline std::string data_path(const std::string & rel) { return std::string(SRG_DATA_DIR) + "/" + rel; }

inline const srg::Dataset & mushroom()
{
    static const srg::Dataset ds = [] {
        srg::CsvOptions options;
        options.schema = srg::read_schema(data_path("mushroom/schema.json"));
        return srg::load_csv(data_path("mushroom/agaricus-lepiota.data"), options);
    }();
    return ds;
}

inline const srg::Dataset & tae()
{
    static const srg::Dataset ds = [] {
        srg::CsvOptions options;
        options.schema = srg::read_schema(data_path("tae/schema.json"));
        return srg::load_csv(data_path("tae/tae.data"), options);
    }();
    return ds;
}

inline std::string slurp(const std::string & path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Raw tokens of a comma-separated file, read without the library.
inline std::vector<std::vector<std::string>> raw_rows(const std::string & path)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(path));
    std::string line;
    while (std::getline(in, line)) {
        if (! line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

// Mushroom raw rows: column 0 is the class, column i is attribute x_i.
inline const std::vector<std::vector<std::string>> & mushroom_raw()
{
    static const auto rows = raw_rows(data_path("mushroom/agaricus-lepiota.data"));
    return rows;
}

// Uniform random categorical dataset with `values` tokens per attribute.
inline srg::Dataset random_dataset(std::uint64_t seed, std::size_t n, int width, int values, int classes)
{
    std::mt19937_64 rng(seed);
    std::vector<srg::AttributeSchema> attrs;
    for (int a = 1; a <= width; ++a) {
        std::vector<std::string> tokens;
        for (int v = 0; v < values; ++v)
            tokens.push_back(std::string(1, static_cast<char>('a' + v)));
        attrs.push_back({"a" + std::to_string(a), a, srg::MeasurementKind::nominal, srg::Codebook(tokens), {}});
    }
    std::vector<std::string> class_tokens;
    for (int c = 0; c < classes; ++c)
        class_tokens.push_back("c" + std::to_string(c + 1));
    srg::ClassSchema cls{"class", 0, srg::Codebook(class_tokens)};
    std::vector<srg::Code> cells;
    std::vector<srg::ClassId> labels;
    for (std::size_t r = 0; r < n; ++r) {
        for (int a = 0; a < width; ++a)
            cells.push_back(static_cast<srg::Code>(rng() % values) + 1);
        labels.push_back(static_cast<srg::ClassId>(rng() % classes) + 1);
    }
    return srg::Dataset(attrs, cls, cells, labels);
}

}
