#ifndef GRANULE_VALUE_HPP
#define GRANULE_VALUE_HPP

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "granule/errors.hpp"

namespace granule {

// A cell value: a number or a categorical token. CSV tokens that parse
// completely as a double become numbers; everything else stays a token.
using Value = std::variant<double, std::string>;

// A valuation: finite nonempty set of values, kept sorted and deduplicated
// in the canonical order (numbers before tokens).
using ValueSet = std::vector<Value>;

inline bool is_number(const Value& v) { return v.index() == 0; }

// Canonical order across kinds, used for storage and serialization only.
// Numbers sort before tokens; it is not the ordering the algorithms use.
inline bool value_less_canonical(const Value& a, const Value& b) {
    if (a.index() != b.index())
        return a.index() < b.index();
    if (is_number(a))
        return std::get<double>(a) < std::get<double>(b);
    return std::get<std::string>(a) < std::get<std::string>(b);
}

// Three-way comparison in the attribute order: numbers by value, tokens
// lexicographically. Mixed kinds cannot be ordered.
inline int compare_values(const Value& a, const Value& b) {
    if (a.index() != b.index())
        fail(errc::ordering, "cannot order a number against a categorical token");
    if (is_number(a)) {
        double x = std::get<double>(a), y = std::get<double>(b);
        return x < y ? -1 : (x > y ? 1 : 0);
    }
    const auto& x = std::get<std::string>(a);
    const auto& y = std::get<std::string>(b);
    return x < y ? -1 : (x > y ? 1 : 0);
}

Value parse_value(const std::string& token);
std::string format_value(const Value& v);

void to_json(nlohmann::json& j, const Value& v);
void from_json(const nlohmann::json& j, Value& v);

// Sorts canonically and drops duplicates in place.
void normalize_value_set(ValueSet& s);

} // namespace granule

// std::variant lives outside namespace granule, so argument-dependent
// lookup cannot find the converters above; route through the serializer
// customization point instead.
namespace nlohmann {
template <>
struct adl_serializer<std::variant<double, std::string>> {
    static void to_json(json& j, const std::variant<double, std::string>& v) {
        granule::to_json(j, v);
    }
    static void from_json(const json& j, std::variant<double, std::string>& v) {
        granule::from_json(j, v);
    }
};
} // namespace nlohmann

#endif
