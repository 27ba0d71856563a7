#include <srg/errors.hpp>
#include <srg/hansel.hpp>

#include <algorithm>
#include <bit>
#include <sstream>

namespace srg {

int BitVector::count() const { return std::popcount(mask); }

std::string BitVector::str() const
{
    std::string s(width, '0');
    for (int i = 0; i < width; ++i)
        if (test(i))
            s[i] = '1';
    return s;
}

BitVector parse_bits(const std::string & text)
{
    BitVector v{0, static_cast<int>(text.size())};
    if (text.size() > 32)
        throw ValidationError("bit vector too wide");
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '1')
            v.mask |= 1u << i;
        else if (text[i] != '0')
            throw ValidationError("bit vector must contain only 0 and 1");
    }
    return v;
}

namespace {
    // Lexicographic comparison reading the first attribute first.
    bool lex_less(std::uint32_t a, std::uint32_t b, int width)
    {
        for (int i = 0; i < width; ++i) {
            auto x = (a >> i) & 1u, y = (b >> i) & 1u;
            if (x != y)
                return x < y;
        }
        return false;
    }

    using MaskChains = std::vector<std::vector<std::uint32_t>>;

    MaskChains build_masks(int n)
    {
        if (n == 1)
            return {{0u, 1u}};
        MaskChains out;
        for (auto & c : build_masks(n - 1)) {
            // The new attribute takes the first position; older ones shift right.
            std::vector<std::uint32_t> lower;
            lower.reserve(c.size() + 1);
            for (auto v : c)
                lower.push_back(v << 1);
            lower.push_back((c.back() << 1) | 1u);
            out.push_back(std::move(lower));
            if (c.size() > 1) {
                std::vector<std::uint32_t> upper;
                upper.reserve(c.size() - 1);
                for (std::size_t i = 0; i + 1 < c.size(); ++i)
                    upper.push_back((c[i] << 1) | 1u);
                out.push_back(std::move(upper));
            }
        }
        std::stable_sort(out.begin(), out.end(), [n](auto & a, auto & b) {
            if (a.size() != b.size())
                return a.size() < b.size();
            return lex_less(a.front(), b.front(), n);
        });
        return out;
    }
}

std::vector<HanselChain> build_chains(int n)
{
    if (n < 1 || n > 24)
        throw ValidationError("chain width must be between 1 and 24, got " + std::to_string(n));
    std::vector<HanselChain> chains;
    for (auto & c : build_masks(n)) {
        HanselChain chain;
        chain.reserve(c.size());
        for (auto m : c)
            chain.push_back({m, n});
        chains.push_back(std::move(chain));
    }
    return chains;
}

namespace {
    class LabelStore {
    public:
        explicit LabelStore(int width) : width_(width), full_((1u << width) - 1), labels_(std::size_t{1} << width) {}

        Label get(std::uint32_t m) const { return labels_[m]; }

        // Records a queried answer and its monotone consequences. Returns how many
        // other vectors became known.
        std::size_t assign(std::uint32_t v, bool success)
        {
            labels_[v] = success ? Label::success : Label::failure;
            std::size_t added = 0;
            if (success) {
                // Supersets of v: walk subsets of the complement.
                std::uint32_t free = full_ & ~v;
                for (std::uint32_t s = free;; s = (s - 1) & free) {
                    auto w = v | s;
                    if (labels_[w] == Label::unknown) {
                        labels_[w] = Label::success;
                        ++added;
                    }
                    if (s == 0)
                        break;
                }
            }
            else {
                for (std::uint32_t s = v;; s = (s - 1) & v) {
                    if (labels_[s] == Label::unknown) {
                        labels_[s] = Label::failure;
                        ++added;
                    }
                    if (s == 0)
                        break;
                }
            }
            return added;
        }

        std::vector<Label> release() { return std::move(labels_); }

    private:
        int width_;
        std::uint32_t full_;
        std::vector<Label> labels_;
    };
}

SearchResult monotone_search(const std::vector<HanselChain> & chains, const MonotoneEvaluator & evaluator,
    const TraversalPolicy & policy)
{
    if (chains.empty())
        throw ValidationError("no chains to search");
    int width = chains.front().front().width;
    LabelStore store(width);
    SearchResult result;
    result.width = width;

    store.assign(0, false);

    std::vector<const HanselChain *> order;
    for (auto & c : chains)
        order.push_back(&c);
    if (policy.order == ChainOrder::longest_first)
        std::stable_sort(order.begin(), order.end(), [](auto * a, auto * b) { return a->size() > b->size(); });

    auto ask = [&](const BitVector & v) {
        bool r = evaluator(v);
        result.trace.push_back({v, r});
        return r;
    };

    for (auto * chain : order) {
        while (true) {
            std::vector<std::size_t> unknown;
            for (std::size_t i = 0; i < chain->size(); ++i)
                if (store.get((*chain)[i].mask) == Label::unknown)
                    unknown.push_back(i);
            if (unknown.empty())
                break;
            std::size_t pick = 0;
            switch (policy.start) {
            case StartPoint::bottom:
                pick = unknown.front();
                break;
            case StartPoint::top:
                pick = unknown.back();
                break;
            case StartPoint::middle:
                pick = unknown[unknown.size() / 2];
                break;
            }
            auto & v = (*chain)[pick];
            bool r = ask(v);
            result.inferred += store.assign(v.mask, r);
        }
        if (policy.verify)
            for (auto & v : *chain) {
                if (v.mask == 0)
                    continue;
                bool known = store.get(v.mask) == Label::success;
                bool seen = std::any_of(result.trace.begin(), result.trace.end(),
                    [&](const Query & q) { return q.vector.mask == v.mask; });
                if (seen)
                    continue;
                bool actual = evaluator(v);
                if (actual != known)
                    throw ContractViolation("evaluator is not monotone: " + v.str() + " answered "
                        + (actual ? "success" : "failure") + " but monotonicity implies "
                        + (known ? "success" : "failure"));
            }
    }

    result.labels = store.release();
    return result;
}

std::string dump_chains(const std::vector<HanselChain> & chains)
{
    std::ostringstream os;
    for (std::size_t k = 0; k < chains.size(); ++k) {
        os << "chain " << k + 1 << ":";
        for (auto & v : chains[k])
            os << ' ' << v.str();
        os << '\n';
    }
    return os.str();
}

std::string dump_trace(const SearchResult & result)
{
    std::ostringstream os;
    for (std::size_t k = 0; k < result.trace.size(); ++k)
        os << "query " << k + 1 << ": " << result.trace[k].vector.str() << ' '
           << (result.trace[k].success ? "success" : "failure") << '\n';
    return os.str();
}

StartPoint parse_start_point(const std::string & text)
{
    if (text == "bottom")
        return StartPoint::bottom;
    if (text == "top")
        return StartPoint::top;
    if (text == "middle")
        return StartPoint::middle;
    throw ValidationError("start point must be bottom, top or middle");
}

}
