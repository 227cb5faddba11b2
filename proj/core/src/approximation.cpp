#include "granule/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace granule {

namespace {

constexpr int kHardEnumerationCap = 24; // 2^24 subset sweeps at most

std::vector<int> normalize_query(const BlockSystem& bs, const std::vector<int>& query) {
    std::vector<int> q = query;
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());
    for (int v : q) {
        if (v < 0 || v >= bs.universe_size)
            fail(errc::bounds, "object index " + std::to_string(v) + " outside universe of " +
                                   std::to_string(bs.universe_size));
    }
    return q;
}

} // namespace

GranularApproximation approximate(const BlockSystem& bs, const std::vector<int>& query) {
    GranularApproximation g;
    g.query = normalize_query(bs, query);

    std::vector<char> in_query(static_cast<std::size_t>(bs.universe_size), 0);
    for (int v : g.query) in_query[static_cast<std::size_t>(v)] = 1;
    std::vector<char> in_lower(static_cast<std::size_t>(bs.universe_size), 0);
    std::vector<char> in_upper(static_cast<std::size_t>(bs.universe_size), 0);

    for (std::size_t b = 0; b < bs.blocks.size(); ++b) {
        const auto& block = bs.blocks[b];
        if (block.empty()) continue;
        bool inside = true, meets = false;
        for (int v : block) {
            if (in_query[static_cast<std::size_t>(v)]) {
                meets = true;
            } else {
                inside = false;
            }
        }
        if (inside) {
            g.lower_blocks.push_back(static_cast<int>(b));
            for (int v : block) in_lower[static_cast<std::size_t>(v)] = 1;
        }
        if (meets) {
            g.upper_blocks.push_back(static_cast<int>(b));
            for (int v : block) in_upper[static_cast<std::size_t>(v)] = 1;
        }
    }
    for (int v = 0; v < bs.universe_size; ++v) {
        if (in_lower[static_cast<std::size_t>(v)]) g.lower.push_back(v);
        if (in_upper[static_cast<std::size_t>(v)]) g.upper.push_back(v);
    }
    return g;
}

std::vector<int> lower_approximation(const BlockSystem& bs, const std::vector<int>& query) {
    return approximate(bs, query).lower;
}

std::vector<int> upper_approximation(const BlockSystem& bs, const std::vector<int>& query) {
    return approximate(bs, query).upper;
}

double xi5(const std::vector<int>& a, const std::vector<int>& b) {
    if (b.empty()) fail(errc::domain, "inclusion degree is undefined for an empty second argument");
    std::vector<int> sa = a, sb = b;
    std::sort(sa.begin(), sa.end());
    sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
    std::sort(sb.begin(), sb.end());
    sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
    std::size_t missed = 0;
    for (int v : sb) {
        if (!std::binary_search(sa.begin(), sa.end(), v)) ++missed;
    }
    return static_cast<double>(missed) / static_cast<double>(sb.size());
}

double accuracy(const BlockSystem& bs, const std::vector<int>& query) {
    GranularApproximation g = approximate(bs, query);
    if (g.upper.empty()) return 1.0; // only the empty query, by convention
    return static_cast<double>(g.lower.size()) / static_cast<double>(g.upper.size());
}

double decision_gamma(const BlockSystem& bs, const std::vector<int>& class_of_object) {
    if (static_cast<int>(class_of_object.size()) != bs.universe_size)
        fail(errc::dimension, "class labels cover " + std::to_string(class_of_object.size()) +
                                  " objects but the universe has " +
                                  std::to_string(bs.universe_size));
    if (bs.universe_size == 0) return 1.0;
    std::vector<char> covered(static_cast<std::size_t>(bs.universe_size), 0);
    for (const auto& block : bs.blocks) {
        if (block.empty()) continue;
        int cls = class_of_object[static_cast<std::size_t>(block.front())];
        bool pure = std::all_of(block.begin(), block.end(), [&](int v) {
            return class_of_object[static_cast<std::size_t>(v)] == cls;
        });
        if (pure) {
            for (int v : block) covered[static_cast<std::size_t>(v)] = 1;
        }
    }
    std::size_t count = static_cast<std::size_t>(
        std::count(covered.begin(), covered.end(), static_cast<char>(1)));
    return static_cast<double>(count) / static_cast<double>(bs.universe_size);
}

namespace {

using Mask = std::uint32_t;

struct MaskedBlocks {
    int n = 0;
    std::vector<Mask> block_masks;

    // lower/upper of the subset encoded by s
    std::pair<Mask, Mask> approx(Mask s) const {
        Mask lower = 0, upper = 0;
        for (Mask b : block_masks) {
            if ((b & ~s) == 0) lower |= b;
            if ((b & s) != 0) upper |= b;
        }
        return {lower, upper};
    }
};

MaskedBlocks masked_blocks(const BlockSystem& bs) {
    MaskedBlocks mb;
    mb.n = bs.universe_size;
    for (const auto& block : bs.blocks) {
        Mask m = 0;
        for (int v : block) m |= Mask{1} << v;
        if (m != 0) mb.block_masks.push_back(m);
    }
    return mb;
}

std::vector<int> mask_to_set(Mask m) {
    std::vector<int> out;
    for (int v = 0; m != 0; ++v, m >>= 1) {
        if (m & 1) out.push_back(v);
    }
    return out;
}

Mask set_to_mask(const std::vector<int>& s, int n) {
    Mask m = 0;
    for (int v : s) {
        if (v < 0 || v >= n)
            fail(errc::bounds, "object index " + std::to_string(v) + " outside universe of " +
                                   std::to_string(n));
        m |= Mask{1} << v;
    }
    return m;
}

// The subset masks an enumeration visits, and whether it was exhaustive.
std::pair<std::vector<Mask>, bool> subject_masks(int n, const EnumerationOptions& options) {
    if (options.exhaustive_bound > kHardEnumerationCap)
        fail(errc::parameter, "exhaustive enumeration bound cannot exceed " +
                                  std::to_string(kHardEnumerationCap));
    if (n <= options.exhaustive_bound) {
        std::vector<Mask> masks;
        masks.reserve(std::size_t{1} << n);
        for (Mask s = 0; s < (Mask{1} << n); ++s) masks.push_back(s);
        return {std::move(masks), true};
    }
    if (!options.sample)
        fail(errc::capacity, "universe of " + std::to_string(n) +
                                 " exceeds the exhaustive enumeration bound of " +
                                 std::to_string(options.exhaustive_bound) +
                                 "; request sampling explicitly");
    if (n > kHardEnumerationCap)
        fail(errc::capacity, "rough-object enumeration supports universes up to " +
                                 std::to_string(kHardEnumerationCap) + " elements");
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<Mask> dist(0, (Mask{1} << n) - 1);
    std::vector<Mask> masks;
    masks.reserve(options.sample_count + 2);
    masks.push_back(0);
    masks.push_back((Mask{1} << n) - 1); // keep the trivial pairs represented
    for (std::size_t i = 0; i < options.sample_count; ++i) masks.push_back(dist(rng));
    return {std::move(masks), false};
}

} // namespace

RoughObjectSpace rough_object_space(const BlockSystem& bs, RoughKind kind,
                                    const EnumerationOptions& options) {
    RoughObjectSpace space;
    space.kind = kind;
    space.seed = options.seed;

    auto [masks, exhaustive] = subject_masks(bs.universe_size, options);
    space.exhaustive = exhaustive;
    if (kind == RoughKind::f && !exhaustive)
        fail(errc::parameter,
             "membership in the non-approximation family is only certified by the exhaustive sweep");

    MaskedBlocks mb = masked_blocks(bs);

    if (kind == RoughKind::e1) {
        std::set<std::pair<Mask, Mask>> seen;
        for (Mask s : masks) seen.insert(mb.approx(s));
        for (const auto& [lo, up] : seen)
            space.pairs.push_back(RoughPair{mask_to_set(lo), mask_to_set(up)});
        std::sort(space.pairs.begin(), space.pairs.end());
    } else if (kind == RoughKind::e2) {
        std::set<Mask> members;
        for (Mask s : masks) {
            if (mb.approx(s).second == s) members.insert(s);
        }
        for (Mask m : members) space.sets.push_back(mask_to_set(m));
        std::sort(space.sets.begin(), space.sets.end());
    } else {
        std::set<Mask> images;
        for (Mask s : masks) {
            auto [lo, up] = mb.approx(s);
            images.insert(lo);
            images.insert(up);
        }
        for (Mask s = 0; s < (Mask{1} << bs.universe_size); ++s) {
            if (!images.count(s)) space.sets.push_back(mask_to_set(s));
        }
        std::sort(space.sets.begin(), space.sets.end());
    }
    return space;
}

std::vector<RoughPair> rough_pairs(const BlockSystem& bs, const EnumerationOptions& options) {
    return rough_object_space(bs, RoughKind::e1, options).pairs;
}

std::vector<std::vector<int>> approximation_space(const BlockSystem& bs,
                                                  const EnumerationOptions& options) {
    auto [masks, exhaustive] = subject_masks(bs.universe_size, options);
    (void)exhaustive;
    MaskedBlocks mb = masked_blocks(bs);
    std::set<Mask> images;
    for (Mask s : masks) {
        auto [lo, up] = mb.approx(s);
        images.insert(lo);
        images.insert(up);
    }
    std::vector<std::vector<int>> out;
    out.reserve(images.size());
    for (Mask m : images) out.push_back(mask_to_set(m));
    std::sort(out.begin(), out.end());
    return out;
}

RoughPair minimal_cover_pair(const BlockSystem& bs, const std::vector<int>& a,
                             const EnumerationOptions& options) {
    if (bs.universe_size > options.exhaustive_bound ||
        bs.universe_size > kHardEnumerationCap)
        fail(errc::capacity, "minimal-cover search needs the exhaustive rough-object sweep; "
                             "universe of " +
                                 std::to_string(bs.universe_size) + " exceeds the bound of " +
                                 std::to_string(std::min(options.exhaustive_bound,
                                                         kHardEnumerationCap)));

    Mask target = set_to_mask(a, bs.universe_size);
    MaskedBlocks mb = masked_blocks(bs);

    std::set<std::pair<Mask, Mask>> pairs;
    std::set<Mask> images;
    for (Mask s = 0; s < (Mask{1} << bs.universe_size); ++s) {
        auto p = mb.approx(s);
        pairs.insert(p);
        images.insert(p.first);
        images.insert(p.second);
    }
    if (!images.count(target))
        fail(errc::domain, "the given set is no subset's lower or upper approximation");

    std::vector<std::pair<Mask, Mask>> candidates;
    for (const auto& p : pairs) {
        if ((target & ~p.first) == 0 && (target & ~p.second) == 0) candidates.push_back(p);
    }
    if (candidates.empty())
        fail(errc::domain, "no rough pair covers the given set"); // unreachable: (U,U) covers all

    auto below = [](const std::pair<Mask, Mask>& x, const std::pair<Mask, Mask>& y) {
        return (x.first & ~y.first) == 0 && (x.second & ~y.second) == 0;
    };
    std::vector<std::pair<Mask, Mask>> minimal;
    for (const auto& p : candidates) {
        bool is_minimal = true;
        for (const auto& q : candidates) {
            if (q != p && below(q, p)) {
                is_minimal = false;
                break;
            }
        }
        if (is_minimal) minimal.push_back(p);
    }

    std::vector<RoughPair> ranked;
    ranked.reserve(minimal.size());
    for (const auto& p : minimal)
        ranked.push_back(RoughPair{mask_to_set(p.first), mask_to_set(p.second)});
    std::sort(ranked.begin(), ranked.end(), [](const RoughPair& x, const RoughPair& y) {
        if (x.upper.size() != y.upper.size()) return x.upper.size() < y.upper.size();
        if (x.lower.size() != y.lower.size()) return x.lower.size() < y.lower.size();
        if (x.upper != y.upper) return x.upper < y.upper;
        return x.lower < y.lower;
    });
    return ranked.front();
}

void RrfRegistry::add(RrfDescriptor descriptor, Fn fn) {
    std::string name = descriptor.name;
    if (name.empty()) fail(errc::parameter, "an RRF needs a name");
    entries_[name] = {std::move(descriptor), std::move(fn)};
}

bool RrfRegistry::contains(const std::string& name) const { return entries_.count(name) != 0; }

const RrfDescriptor& RrfRegistry::descriptor(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) fail(errc::parameter, "no RRF named '" + name + "' is registered");
    return it->second.first;
}

std::vector<std::string> RrfRegistry::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [name, entry] : entries_) out.push_back(name);
    return out;
}

RrfValue RrfRegistry::evaluate(const std::string& name, const RrfInput& input) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) fail(errc::parameter, "no RRF named '" + name + "' is registered");
    const auto& [desc, fn] = it->second;

    RrfValue value = fn(input);
    switch (desc.type) {
    case RrfType::type1: {
        const auto* pair = std::get_if<RoughPair>(&value);
        if (!pair)
            fail(errc::internal, "codomain contract violated: '" + name +
                                     "' is pair-valued but returned another shape");
        for (int v : pair->lower) {
            if (!std::binary_search(pair->upper.begin(), pair->upper.end(), v))
                fail(errc::internal, "codomain contract violated: '" + name +
                                         "' returned a pair whose lower part escapes its upper");
        }
        break;
    }
    case RrfType::type2: {
        const auto* x = std::get_if<double>(&value);
        if (!x)
            fail(errc::internal, "codomain contract violated: '" + name +
                                     "' is real-valued but returned another shape");
        if (!std::isfinite(*x))
            fail(errc::internal, "codomain contract violated: '" + name +
                                     "' returned a non-finite real");
        break;
    }
    case RrfType::type3:
        if (!std::holds_alternative<std::vector<std::vector<int>>>(value))
            fail(errc::internal, "codomain contract violated: '" + name +
                                     "' is collection-valued but returned another shape");
        break;
    case RrfType::type_h:
        if (!std::holds_alternative<nlohmann::json>(value))
            fail(errc::internal, "codomain contract violated: '" + name +
                                     "' must return a structured decomposition report");
        break;
    }
    return value;
}

RrfRegistry default_rrf_registry(const BlockSystem& bs, const EnumerationOptions& options) {
    RrfRegistry reg;

    reg.add(RrfDescriptor{"xi5", RrfType::type2, "pairs of object sets with nonempty second",
                          "reals in [0,1]", false},
            [](const RrfInput& input) -> RrfValue {
                if (!input.has_b)
                    fail(errc::parameter, "'xi5' needs two set arguments");
                return xi5(input.a, input.b);
            });

    reg.add(RrfDescriptor{"accuracy", RrfType::type2, "object sets", "reals in [0,1]", false},
            [bs](const RrfInput& input) -> RrfValue { return accuracy(bs, input.a); });

    reg.add(RrfDescriptor{"minimal-cover", RrfType::type1,
                          "sets that are some subset's approximation", "rough pairs", true},
            [bs, options](const RrfInput& input) -> RrfValue {
                return minimal_cover_pair(bs, input.a, options);
            });

    reg.add(RrfDescriptor{"upper-blocks", RrfType::type3, "object sets",
                          "collections of blocks", false},
            [bs](const RrfInput& input) -> RrfValue {
                GranularApproximation g = approximate(bs, input.a);
                std::vector<std::vector<int>> out;
                out.reserve(g.upper_blocks.size());
                for (int b : g.upper_blocks) out.push_back(bs.blocks[static_cast<std::size_t>(b)]);
                return out;
            });

    return reg;
}

void to_json(nlohmann::json& j, const GranularApproximation& g) {
    j = nlohmann::json{{"query", g.query},
                       {"lower", g.lower},
                       {"upper", g.upper},
                       {"lower_blocks", g.lower_blocks},
                       {"upper_blocks", g.upper_blocks}};
}

void from_json(const nlohmann::json& j, GranularApproximation& g) {
    g = GranularApproximation{};
    g.query = j.at("query").get<std::vector<int>>();
    g.lower = j.at("lower").get<std::vector<int>>();
    g.upper = j.at("upper").get<std::vector<int>>();
    g.lower_blocks = j.at("lower_blocks").get<std::vector<int>>();
    g.upper_blocks = j.at("upper_blocks").get<std::vector<int>>();
}

void to_json(nlohmann::json& j, const RoughPair& p) {
    j = nlohmann::json{{"lower", p.lower}, {"upper", p.upper}};
}

void from_json(const nlohmann::json& j, RoughPair& p) {
    p = RoughPair{};
    p.lower = j.at("lower").get<std::vector<int>>();
    p.upper = j.at("upper").get<std::vector<int>>();
}

void to_json(nlohmann::json& j, const RoughObjectSpace& space) {
    const char* kind = space.kind == RoughKind::e1   ? "E1"
                       : space.kind == RoughKind::e2 ? "E2"
                                                     : "F";
    j = nlohmann::json{{"kind", kind}, {"exhaustive", space.exhaustive}, {"seed", space.seed}};
    if (space.kind == RoughKind::e1) {
        j["pairs"] = space.pairs;
    } else {
        j["sets"] = space.sets;
    }
}

void to_json(nlohmann::json& j, const RrfDescriptor& d) {
    const char* type = d.type == RrfType::type1   ? "type-1"
                       : d.type == RrfType::type2 ? "type-2"
                       : d.type == RrfType::type3 ? "type-3"
                                                  : "type-H";
    j = nlohmann::json{{"name", d.name},
                       {"rrf_type", type},
                       {"domain_spec", d.domain},
                       {"codomain_spec", d.codomain},
                       {"partial", d.partial}};
}

} // namespace granule
