#include <srg/dataset.hpp>
#include <srg/errors.hpp>
#include <srg/rule.hpp>

#include <algorithm>
#include <cctype>
#include <map>

namespace srg {

Clause::Clause(int attribute_, Polarity polarity_, std::vector<Code> values_) :
    attribute(attribute_), polarity(polarity_), values(std::move(values_))
{
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.empty())
        throw ValidationError("clause on x" + std::to_string(attribute) + " has an empty value set");
    if (attribute < 1)
        throw ValidationError("clause attribute index must be positive");
}

bool Clause::matches(Code v) const
{
    bool in = values.size() == 1 ? values.front() == v : std::binary_search(values.begin(), values.end(), v);
    return polarity == Polarity::include ? in : ! in;
}

int Clause::base_clause_count() const
{
    return polarity == Polarity::include ? static_cast<int>(values.size()) : 1;
}

Rule::Rule(std::vector<Clause> clauses, ClassId target) : clauses_(std::move(clauses)), target_(target)
{
    std::sort(clauses_.begin(), clauses_.end());
    for (std::size_t i = 1; i < clauses_.size(); ++i)
        if (clauses_[i].attribute == clauses_[i - 1].attribute)
            throw ValidationError("rule has two clauses on x" + std::to_string(clauses_[i].attribute));
}

int Rule::base_clause_count() const
{
    int n = 0;
    for (auto & c : clauses_)
        n += c.base_clause_count();
    return n;
}

std::vector<int> Rule::attributes() const
{
    std::vector<int> out;
    for (auto & c : clauses_)
        out.push_back(c.attribute);
    return out;
}

const Clause * Rule::clause_for(int attribute) const
{
    for (auto & c : clauses_)
        if (c.attribute == attribute)
            return &c;
    return nullptr;
}

std::vector<RelationUse> Rule::relation_uses() const
{
    std::vector<RelationUse> out;
    for (auto & c : clauses_)
        out.push_back({c.attribute, c.polarity == Polarity::include ? Relation::eq : Relation::neq});
    return out;
}

namespace {
    std::string atom(int attr, const char * op, Code v)
    {
        return "(x" + std::to_string(attr) + op + std::to_string(v) + ")";
    }

    std::string clause_text(const Clause & c, bool alone)
    {
        std::string out;
        const char * joiner = c.polarity == Polarity::include ? " v " : " & ";
        const char * op = c.polarity == Polarity::include ? "=" : "!=";
        for (std::size_t i = 0; i < c.values.size(); ++i) {
            if (i)
                out += joiner;
            out += atom(c.attribute, op, c.values[i]);
        }
        if (c.values.size() > 1 && ! alone && c.polarity == Polarity::include)
            out = "(" + out + ")";
        return out;
    }

    std::string body_text(const Rule & r)
    {
        if (r.clauses().empty())
            return "[true]";
        std::string out = "[";
        for (std::size_t i = 0; i < r.clauses().size(); ++i) {
            if (i)
                out += " & ";
            out += clause_text(r.clauses()[i], r.clauses().size() == 1);
        }
        return out + "]";
    }
}

std::string Rule::text() const { return body_text(*this) + " => C" + std::to_string(target_); }

int CombinedRule::base_clause_count() const
{
    int n = base.base_clause_count();
    for (auto & s : subtracted)
        n += s.base_clause_count();
    return n;
}

std::string CombinedRule::text() const
{
    std::string body = body_text(base);
    if (! subtracted.empty()) {
        body += " & not(";
        for (std::size_t i = 0; i < subtracted.size(); ++i) {
            if (i)
                body += " v ";
            body += body_text(subtracted[i]);
        }
        body += ")";
    }
    if (negated)
        body = "not(" + body + ")";
    return body + " => C" + std::to_string(target);
}

namespace {
    std::string normalise(std::string_view in)
    {
        std::string s(in);
        auto replace_all = [&](const std::string & from, const std::string & to) {
            for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size()))
                s.replace(p, from.size(), to);
        };
        replace_all("\xE2\x89\xA0", "!=");
        replace_all("\xE2\x88\xA8", " v ");
        replace_all("\xE2\x88\xA7", "&");
        std::string out;
        for (char ch : s)
            if (! std::isspace(static_cast<unsigned char>(ch)))
                out += ch;
        return out;
    }

    // Splits at top-level occurrences of `sep` (outside parentheses).
    std::vector<std::string> split_top(const std::string & s, const std::string & sep)
    {
        std::vector<std::string> parts;
        int depth = 0;
        std::size_t start = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '(')
                ++depth;
            else if (s[i] == ')')
                --depth;
            else if (depth == 0 && s.compare(i, sep.size(), sep) == 0) {
                parts.push_back(s.substr(start, i - start));
                start = i + sep.size();
                i += sep.size() - 1;
            }
        }
        parts.push_back(s.substr(start));
        return parts;
    }

    std::string strip_parens(std::string s)
    {
        while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
            int depth = 0;
            bool wraps = true;
            for (std::size_t i = 0; i < s.size(); ++i) {
                depth += s[i] == '(' ? 1 : s[i] == ')' ? -1 : 0;
                if (depth == 0 && i + 1 < s.size()) {
                    wraps = false;
                    break;
                }
            }
            if (! wraps)
                break;
            s = s.substr(1, s.size() - 2);
        }
        return s;
    }

    struct Atom {
        int attribute;
        bool negated;
        Code value;
    };

    Atom parse_atom(const std::string & text)
    {
        auto s = strip_parens(text);
        if (s.size() < 4 || (s[0] != 'x' && s[0] != 'X'))
            throw ValidationError("cannot parse predicate '" + text + "'");
        auto neq = s.find("!=");
        auto eq = s.find('=');
        bool negated = neq != std::string::npos;
        auto op = negated ? neq : eq;
        if (op == std::string::npos)
            throw ValidationError("predicate '" + text + "' has no = or !=");
        try {
            int attr = std::stoi(s.substr(1, op - 1));
            auto value = s.substr(op + (negated ? 2 : 1));
            return {attr, negated, static_cast<Code>(std::stoi(value))};
        }
        catch (const std::logic_error &) {
            throw ValidationError("cannot parse predicate '" + text + "'");
        }
    }
}

Rule parse_rule_text(std::string_view text)
{
    auto s = normalise(text);
    auto arrow = s.find("=>");
    if (arrow == std::string::npos)
        throw ValidationError("rule text lacks '=> C<k>'");
    auto head = s.substr(arrow + 2);
    if (head.empty() || (head[0] != 'C' && head[0] != 'c'))
        throw ValidationError("rule class must be written C<k>");
    ClassId target = std::stoi(head.substr(1));
    auto body = s.substr(0, arrow);
    if (body.size() >= 2 && body.front() == '[' && body.back() == ']')
        body = body.substr(1, body.size() - 2);
    if (body == "true")
        return Rule({}, target);

    std::map<int, Clause> clauses;
    for (auto & conj : split_top(body, "&")) {
        auto parts = split_top(strip_parens(conj), "v");
        std::vector<Atom> atoms;
        for (auto & p : parts)
            atoms.push_back(parse_atom(p));
        int attr = atoms.front().attribute;
        bool negated = atoms.front().negated;
        std::vector<Code> values;
        for (auto & a : atoms) {
            if (a.attribute != attr || a.negated != negated || (negated && atoms.size() > 1))
                throw ValidationError("disjunction must list equalities on one attribute: '" + conj + "'");
            values.push_back(a.value);
        }
        auto polarity = negated ? Polarity::exclude : Polarity::include;
        auto it = clauses.find(attr);
        if (it == clauses.end())
            clauses.emplace(attr, Clause(attr, polarity, values));
        else if (negated && it->second.polarity == Polarity::exclude) {
            auto merged = it->second.values;
            merged.insert(merged.end(), values.begin(), values.end());
            it->second = Clause(attr, Polarity::exclude, merged);
        }
        else
            throw ValidationError("rule constrains x" + std::to_string(attr) + " twice");
    }
    std::vector<Clause> list;
    for (auto & [a, c] : clauses)
        list.push_back(c);
    return Rule(std::move(list), target);
}

nlohmann::json rule_to_json(const Rule & rule)
{
    nlohmann::json doc;
    doc["clauses"] = nlohmann::json::array();
    for (auto & c : rule.clauses())
        doc["clauses"].push_back({{"attr", c.attribute},
            {"polarity", c.polarity == Polarity::include ? "include" : "exclude"}, {"values", c.values}});
    doc["class"] = rule.target();
    return doc;
}

Rule rule_from_json(const nlohmann::json & doc)
{
    try {
        std::vector<Clause> clauses;
        for (auto & c : doc.at("clauses")) {
            auto pol = c.at("polarity").get<std::string>();
            if (pol != "include" && pol != "exclude")
                throw ValidationError("polarity must be include or exclude, got '" + pol + "'");
            clauses.emplace_back(c.at("attr").get<int>(), pol == "include" ? Polarity::include : Polarity::exclude,
                c.at("values").get<std::vector<Code>>());
        }
        return Rule(std::move(clauses), doc.at("class").get<ClassId>());
    }
    catch (const nlohmann::json::exception & e) {
        throw ValidationError(std::string("malformed rule JSON: ") + e.what());
    }
}

nlohmann::json combined_to_json(const CombinedRule & rule)
{
    nlohmann::json doc;
    doc["base"] = rule_to_json(rule.base);
    doc["subtracted"] = nlohmann::json::array();
    for (auto & s : rule.subtracted)
        doc["subtracted"].push_back(rule_to_json(s));
    doc["negated"] = rule.negated;
    doc["class"] = rule.target;
    doc["text"] = rule.text();
    return doc;
}

void validate_rule(const Rule & rule, const Dataset & dataset)
{
    auto uses = rule.relation_uses();
    if (auto v = guard(uses, dataset.attributes()))
        throw ValidationError(v->message());
    for (auto & c : rule.clauses())
        for (auto v : c.values)
            if (! dataset.attribute(c.attribute).codebook.contains(v))
                throw ValidationError("code " + std::to_string(v) + " is outside the codebook of x"
                    + std::to_string(c.attribute));
    if (! dataset.class_schema().codebook.contains(rule.target()))
        throw ValidationError("unknown class C" + std::to_string(rule.target()));
}

}
