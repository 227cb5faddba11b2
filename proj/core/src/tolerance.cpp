#include "granule/tolerance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace granule {

namespace {

constexpr std::size_t kMaxUniverse = 1 << 13; // dense matrix cap (64 MiB)

void check_universe_size(std::size_t n) {
    if (n > kMaxUniverse)
        fail(errc::capacity, "universe of " + std::to_string(n) +
                                 " elements exceeds the dense-relation cap of " +
                                 std::to_string(kMaxUniverse));
}

} // namespace

Tolerance::Tolerance(int size) : size_(size) {
    if (size < 0) fail(errc::parameter, "tolerance size must be non-negative");
    check_universe_size(static_cast<std::size_t>(size));
    cells_.assign(static_cast<size_t>(size) * size, 0);
    for (int i = 0; i < size; ++i) cells_[static_cast<size_t>(i) * size + i] = 1;
}

Tolerance Tolerance::total(int size) {
    Tolerance t(size);
    std::fill(t.cells_.begin(), t.cells_.end(), std::uint8_t{1});
    return t;
}

void Tolerance::set(int i, int j, bool value) {
    check_index(i);
    check_index(j);
    if (i == j) {
        if (!value) fail(errc::parameter, "a tolerance is reflexive; the diagonal cannot be cleared");
        return;
    }
    cells_[static_cast<size_t>(i) * size_ + j] = value ? 1 : 0;
    cells_[static_cast<size_t>(j) * size_ + i] = value ? 1 : 0;
}

void DistanceSpec::validate() const {
    if (attribute.empty() && kind != DistanceKind::user_table)
        fail(errc::parameter, "distance spec needs an attribute name");
    if (!std::isfinite(epsilon) || epsilon < 0)
        fail(errc::parameter, "epsilon must be finite and non-negative");
    if (variant == ToleranceVariant::ratio && epsilon >= 1.0)
        fail(errc::parameter, "ratio variant needs epsilon < 1 (its range is [0,1))");
    if (kind == DistanceKind::user_table) {
        const std::size_t n = table.size();
        for (const auto& row : table) {
            if (row.size() != n)
                fail(errc::dimension, "user distance table must be square");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (table[i][i] != 0.0)
                fail(errc::parameter, "user distance table must have a zero diagonal");
            for (std::size_t j = 0; j < n; ++j) {
                if (!std::isfinite(table[i][j]))
                    fail(errc::numeric, "user distance table contains a non-finite entry");
                if (table[i][j] < 0.0)
                    fail(errc::parameter, "user distance table contains a negative entry");
            }
        }
    } else if (!table.empty()) {
        fail(errc::parameter, "distance table only applies to the user-table kind");
    }
}

namespace {

double numeric_value(const Value& v, const std::string& attribute) {
    if (!is_number(v))
        fail(errc::numeric, "distance on attribute '" + attribute +
                                "' needs numeric values; got token '" + std::get<std::string>(v) +
                                "'");
    return std::get<double>(v);
}

} // namespace

Tolerance tolerance_from_distance(const std::vector<Value>& values, const DistanceSpec& spec) {
    spec.validate();

    std::size_t n = values.size();
    if (spec.kind == DistanceKind::user_table) {
        if (n == 0) {
            n = spec.table.size();
        } else if (n != spec.table.size()) {
            fail(errc::dimension, "user distance table is " + std::to_string(spec.table.size()) +
                                      "x" + std::to_string(spec.table.size()) + " but " +
                                      std::to_string(n) + " values were given");
        }
    }
    check_universe_size(n);

    // Symmetrized directed distance rho(a,b) + rho(b,a). The built-in kinds
    // are already symmetric, so the sum is just twice the distance.
    std::vector<double> numbers;
    double range = 0.0;
    if (spec.kind == DistanceKind::absolute_difference ||
        spec.kind == DistanceKind::normalized_absolute_difference) {
        numbers.reserve(n);
        for (const auto& v : values) numbers.push_back(numeric_value(v, spec.attribute));
        if (spec.kind == DistanceKind::normalized_absolute_difference && n > 0) {
            auto [lo, hi] = std::minmax_element(numbers.begin(), numbers.end());
            range = *hi - *lo;
        }
    }

    auto symmetrized = [&](std::size_t i, std::size_t j) -> double {
        switch (spec.kind) {
        case DistanceKind::absolute_difference:
            return 2.0 * std::abs(numbers[i] - numbers[j]);
        case DistanceKind::normalized_absolute_difference: {
            if (range == 0.0) return 0.0; // constant column: everything at distance zero
            return 2.0 * (std::abs(numbers[i] - numbers[j]) / range);
        }
        case DistanceKind::discrete:
            return values[i] == values[j] ? 0.0 : 2.0;
        case DistanceKind::user_table:
            return spec.table[i][j] + spec.table[j][i];
        }
        fail(errc::internal, "unhandled distance kind");
    };

    Tolerance t(static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = symmetrized(i, j);
            if (!std::isfinite(s))
                fail(errc::numeric, "non-finite distance between elements " + std::to_string(i) +
                                        " and " + std::to_string(j));
            bool related = spec.variant == ToleranceVariant::sum ? (s <= spec.epsilon)
                                                                 : (s / (1.0 + s) <= spec.epsilon);
            if (related) t.set(static_cast<int>(i), static_cast<int>(j));
        }
    }
    return t;
}

Tolerance combine_tolerances(const std::vector<Tolerance>& ts, const CombineMode& mode) {
    if (ts.empty()) fail(errc::dimension, "cannot combine an empty list of tolerances");
    const int n = ts.front().size();
    for (const auto& t : ts) {
        if (t.size() != n)
            fail(errc::dimension, "tolerances to combine must share one universe; got sizes " +
                                      std::to_string(n) + " and " + std::to_string(t.size()));
    }
    const int count = static_cast<int>(ts.size());
    if (mode.kind == Combine::at_least && (mode.k < 1 || mode.k > count))
        fail(errc::parameter, "at-least threshold must lie in [1, " + std::to_string(count) +
                                  "]; got " + std::to_string(mode.k));

    Tolerance out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            int votes = 0;
            for (const auto& t : ts)
                if (t.related(i, j)) ++votes;
            bool related = false;
            switch (mode.kind) {
            case Combine::conjunction: related = votes == count; break;
            case Combine::disjunction: related = votes > 0; break;
            case Combine::at_least: related = votes >= mode.k; break;
            }
            if (related) out.set(i, j);
        }
    }
    return out;
}

Tolerance similarity_matrix(const InformationTable& table, const std::vector<DistanceSpec>& specs,
                            const CombineMode& mode) {
    if (specs.empty()) fail(errc::parameter, "similarity needs at least one distance spec");
    std::vector<Tolerance> parts;
    parts.reserve(specs.size());
    for (const auto& spec : specs) {
        std::vector<Value> column;
        if (spec.kind == DistanceKind::user_table && spec.attribute.empty()) {
            // explicit matrix over the table's objects; no column involved
            if (spec.table.size() != table.objects.size())
                fail(errc::dimension, "user distance table size does not match the object count");
        } else {
            if (!table.has_attribute(spec.attribute))
                fail(errc::parameter, "unknown attribute '" + spec.attribute + "'");
            int a = table.attribute_index(spec.attribute);
            column.reserve(table.objects.size());
            for (int o = 0; o < table.object_count(); ++o)
                column.push_back(table.single(a, o));
        }
        parts.push_back(tolerance_from_distance(column, spec));
    }
    return combine_tolerances(parts, mode);
}

std::vector<int> product_coordinates(std::size_t index, const std::vector<int>& factor_sizes) {
    std::vector<int> coords(factor_sizes.size(), 0);
    for (std::size_t f = factor_sizes.size(); f-- > 0;) {
        coords[f] = static_cast<int>(index % static_cast<std::size_t>(factor_sizes[f]));
        index /= static_cast<std::size_t>(factor_sizes[f]);
    }
    return coords;
}

Tolerance product_tolerance(const std::vector<Tolerance>& factors) {
    if (factors.empty()) fail(errc::parameter, "product of zero tolerances is undefined here");
    std::size_t total = 1;
    std::vector<int> sizes;
    sizes.reserve(factors.size());
    for (const auto& f : factors) {
        if (f.size() == 0) fail(errc::parameter, "product factors must be non-empty");
        sizes.push_back(f.size());
        if (total > kMaxUniverse / static_cast<std::size_t>(f.size()))
            fail(errc::capacity, "product universe exceeds the dense-relation cap of " +
                                     std::to_string(kMaxUniverse));
        total *= static_cast<std::size_t>(f.size());
    }

    Tolerance out(static_cast<int>(total));
    for (std::size_t a = 0; a < total; ++a) {
        auto ca = product_coordinates(a, sizes);
        for (std::size_t b = a + 1; b < total; ++b) {
            auto cb = product_coordinates(b, sizes);
            bool related = true;
            for (std::size_t f = 0; f < factors.size() && related; ++f)
                related = factors[f].related(ca[f], cb[f]);
            if (related) out.set(static_cast<int>(a), static_cast<int>(b));
        }
    }
    return out;
}

bool is_compatible_tolerance(int n, const Tolerance& t) {
    if (t.size() != n)
        fail(errc::dimension, "tolerance is over " + std::to_string(t.size()) +
                                  " elements, not the chain of " + std::to_string(n));
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (!t.related(a, b)) continue;
            for (int c = 0; c < n; ++c) {
                for (int d = 0; d < n; ++d) {
                    if (!t.related(c, d)) continue;
                    if (!t.related(std::min(a, c), std::min(b, d))) return false;
                    if (!t.related(std::max(a, c), std::max(b, d))) return false;
                }
            }
        }
    }
    return true;
}

bool is_pre_block(const Tolerance& t, const std::vector<int>& k) {
    for (std::size_t x = 0; x < k.size(); ++x) {
        for (std::size_t y = x + 1; y < k.size(); ++y) {
            if (!t.related(k[x], k[y])) return false;
        }
    }
    return true;
}

bool is_block(const Tolerance& t, const std::vector<int>& k) {
    if (!is_pre_block(t, k)) return false;
    std::vector<char> member(static_cast<std::size_t>(t.size()), 0);
    for (int x : k) {
        if (x < 0 || x >= t.size())
            fail(errc::bounds, "element index " + std::to_string(x) + " outside universe of " +
                                   std::to_string(t.size()));
        member[static_cast<std::size_t>(x)] = 1;
    }
    for (int v = 0; v < t.size(); ++v) {
        if (member[static_cast<std::size_t>(v)]) continue;
        bool extends = true;
        for (int x : k) {
            if (!t.related(v, x)) {
                extends = false;
                break;
            }
        }
        if (extends) return false; // K u {v} is a larger pre-block
    }
    return true;
}

void to_json(nlohmann::json& j, const Tolerance& t) {
    nlohmann::json pairs = nlohmann::json::array();
    for (int i = 0; i < t.size(); ++i) {
        for (int k = i + 1; k < t.size(); ++k) {
            if (t.related(i, k)) pairs.push_back({i, k});
        }
    }
    j = nlohmann::json{{"size", t.size()}, {"pairs", std::move(pairs)}};
}

void from_json(const nlohmann::json& j, Tolerance& t) {
    if (!j.is_object() || !j.contains("size") || !j.contains("pairs"))
        fail(errc::schema, "tolerance JSON needs {\"size\": n, \"pairs\": [[i,j],...]}");
    if (!j["size"].is_number_integer() || j["size"].get<long long>() < 0)
        fail(errc::schema, "tolerance size must be a non-negative integer");
    t = Tolerance(j["size"].get<int>());
    if (!j["pairs"].is_array()) fail(errc::schema, "tolerance pairs must be an array");
    for (const auto& p : j["pairs"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() ||
            !p[1].is_number_integer())
            fail(errc::schema, "each tolerance pair must be a two-integer array");
        int a = p[0].get<int>();
        int b = p[1].get<int>();
        if (a < 0 || a >= t.size() || b < 0 || b >= t.size())
            fail(errc::bounds, "tolerance pair [" + std::to_string(a) + "," + std::to_string(b) +
                                   "] outside universe of " + std::to_string(t.size()));
        t.set(a, b);
    }
}

namespace {

const char* distance_kind_name(DistanceKind k) {
    switch (k) {
    case DistanceKind::absolute_difference: return "absolute-difference";
    case DistanceKind::normalized_absolute_difference: return "normalized-absolute-difference";
    case DistanceKind::discrete: return "discrete";
    case DistanceKind::user_table: return "user-table";
    }
    return "?";
}

DistanceKind parse_distance_kind(const std::string& s) {
    if (s == "absolute-difference") return DistanceKind::absolute_difference;
    if (s == "normalized-absolute-difference") return DistanceKind::normalized_absolute_difference;
    if (s == "discrete") return DistanceKind::discrete;
    if (s == "user-table") return DistanceKind::user_table;
    fail(errc::schema, "unknown distance kind '" + s + "'");
}

} // namespace

void to_json(nlohmann::json& j, const DistanceSpec& spec) {
    j = nlohmann::json{{"attribute", spec.attribute},
                       {"kind", distance_kind_name(spec.kind)},
                       {"epsilon", spec.epsilon},
                       {"variant", spec.variant == ToleranceVariant::sum ? "sum" : "ratio"}};
    if (spec.kind == DistanceKind::user_table) j["table"] = spec.table;
}

void from_json(const nlohmann::json& j, DistanceSpec& spec) {
    if (!j.is_object()) fail(errc::schema, "distance spec must be a JSON object");
    spec = DistanceSpec{};
    if (j.contains("attribute")) spec.attribute = j["attribute"].get<std::string>();
    if (j.contains("kind")) spec.kind = parse_distance_kind(j["kind"].get<std::string>());
    if (j.contains("epsilon")) {
        if (!j["epsilon"].is_number()) fail(errc::schema, "epsilon must be a number");
        spec.epsilon = j["epsilon"].get<double>();
    }
    if (j.contains("variant")) {
        std::string v = j["variant"].get<std::string>();
        if (v == "sum") {
            spec.variant = ToleranceVariant::sum;
        } else if (v == "ratio") {
            spec.variant = ToleranceVariant::ratio;
        } else {
            fail(errc::schema, "unknown tolerance variant '" + v + "'");
        }
    }
    if (j.contains("table")) spec.table = j["table"].get<std::vector<std::vector<double>>>();
    spec.validate();
}

void to_json(nlohmann::json& j, const CombineMode& mode) {
    switch (mode.kind) {
    case Combine::conjunction: j = nlohmann::json{{"mode", "AND"}}; break;
    case Combine::disjunction: j = nlohmann::json{{"mode", "OR"}}; break;
    case Combine::at_least: j = nlohmann::json{{"mode", "AT-LEAST"}, {"k", mode.k}}; break;
    }
}

void from_json(const nlohmann::json& j, CombineMode& mode) {
    mode = CombineMode::conjunction();
    if (j.is_string() || (j.is_object() && j.contains("mode"))) {
        std::string m = j.is_string() ? j.get<std::string>() : j["mode"].get<std::string>();
        if (m == "AND") {
            mode.kind = Combine::conjunction;
        } else if (m == "OR") {
            mode.kind = Combine::disjunction;
        } else if (m == "AT-LEAST") {
            mode.kind = Combine::at_least;
            if (!j.is_object() || !j.contains("k"))
                fail(errc::schema, "AT-LEAST combine mode needs a k field");
            mode.k = j["k"].get<int>();
        } else {
            fail(errc::schema, "unknown combine mode '" + m + "'");
        }
    } else {
        fail(errc::schema, "combine mode must be \"AND\", \"OR\", or {\"mode\":\"AT-LEAST\",\"k\":n}");
    }
}

} // namespace granule
