#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

namespace srg {

// Exact non-negative fraction; metrics are kept as integer counts and only
// turned into doubles for display.
struct Ratio {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Ratio() = default;
    Ratio(std::int64_t n, std::int64_t d) : num(n), den(d)
    {
        if (den == 0) {
            num = 0;
            den = 1;
        }
        auto g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Ratio & a, const Ratio & b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(const Ratio & a, const Ratio & b)
    {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

inline std::ostream & operator<<(std::ostream & os, const Ratio & r) { return os << r.str(); }

// Percentage of num/den rounded half-up to `decimals` places, computed in integers.
inline std::string percent_string(std::int64_t num, std::int64_t den, int decimals = 2)
{
    if (den == 0)
        return "0." + std::string(decimals, '0');
    std::int64_t scale = 100;
    for (int i = 0; i < decimals; ++i)
        scale *= 10;
    __int128 scaled = static_cast<__int128>(num) * scale * 2 + den;
    auto q = static_cast<std::int64_t>(scaled / (2 * static_cast<__int128>(den)));
    std::int64_t unit = scale / 100;
    std::string whole = std::to_string(q / unit);
    if (decimals == 0)
        return whole;
    std::string frac = std::to_string(q % unit);
    while (static_cast<int>(frac.size()) < decimals)
        frac.insert(frac.begin(), '0');
    return whole + "." + frac;
}

inline std::string percent_string(const Ratio & r, int decimals = 2) { return percent_string(r.num, r.den, decimals); }

// Value rounded half-up to a fixed number of decimals, as a double.
inline double rounded_percent(const Ratio & r, int decimals = 2) { return std::stod(percent_string(r, decimals)); }

}
