#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace srg {

// Attribute-inclusion vector over a group of `width` attributes; bit i-1 is
// the group's i-th attribute. Printed with the first attribute leftmost.
struct BitVector {
    std::uint32_t mask = 0;
    int width = 0;

    bool test(int i) const { return (mask >> i) & 1u; }
    int count() const;
    bool leq(const BitVector & other) const { return (mask & ~other.mask) == 0; }
    std::string str() const;

    friend bool operator==(const BitVector &, const BitVector &) = default;
};

BitVector parse_bits(const std::string & text);

using HanselChain = std::vector<BitVector>;

// Recursive doubling construction. Chains are ordered by length, then by their
// first vector read left to right.
std::vector<HanselChain> build_chains(int n);

enum class StartPoint { bottom, top, middle };
enum class ChainOrder { given, longest_first };

struct TraversalPolicy {
    StartPoint start = StartPoint::bottom;
    ChainOrder order = ChainOrder::given;
    // Also query vectors whose label was inferred, and fail on disagreement.
    bool verify = false;
};

enum class Label : std::uint8_t { unknown, failure, success };

struct Query {
    BitVector vector;
    bool success = false;
};

struct SearchResult {
    int width = 0;
    // Indexed by mask.
    std::vector<Label> labels;
    std::vector<Query> trace;
    std::size_t inferred = 0;

    std::size_t query_count() const { return trace.size(); }
    bool success(std::uint32_t mask) const { return labels[mask] == Label::success; }
};

using MonotoneEvaluator = std::function<bool(const BitVector &)>;

// Labels every vector, asking `evaluator` only where monotonicity does not
// already decide. The all-zeros vector is a failure without a query.
// Throws ContractViolation in verify mode when an answer contradicts an
// inferred label.
SearchResult monotone_search(const std::vector<HanselChain> & chains, const MonotoneEvaluator & evaluator,
    const TraversalPolicy & policy = {});

std::string dump_chains(const std::vector<HanselChain> & chains);
std::string dump_trace(const SearchResult & result);

StartPoint parse_start_point(const std::string & text);

}
