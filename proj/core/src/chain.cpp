#include "granule/chain.hpp"

#include <algorithm>
#include <limits>

namespace granule {

namespace {

constexpr std::size_t kEnumerationCap = 10'000'000;

std::size_t saturating_add(std::size_t a, std::size_t b) {
    if (a > std::numeric_limits<std::size_t>::max() - b)
        return std::numeric_limits<std::size_t>::max();
    return a + b;
}

// Range of admissible next left endpoints after [lo, hi]. Right endpoints
// always strictly increase and the cover constraint forces lo2 <= hi + 1.
void next_lo_range(ChainKind kind, int lo, int hi, int& lo_min, int& lo_max) {
    lo_min = lo + 1;
    switch (kind) {
    case ChainKind::tolerance: lo_max = hi + 1; break;
    case ChainKind::glued: lo_max = hi; break;
    case ChainKind::congruence:
        lo_min = hi + 1;
        lo_max = hi + 1;
        break;
    }
}

} // namespace

Tolerance ChainBlockSystem::to_tolerance() const {
    Tolerance t(n);
    for (const auto& iv : intervals) {
        for (int a = iv.lo; a <= iv.hi; ++a) {
            for (int b = a + 1; b <= iv.hi; ++b) t.set(a, b);
        }
    }
    return t;
}

BlockSystem ChainBlockSystem::to_block_system() const {
    BlockSystem bs;
    bs.universe_size = n;
    for (const auto& iv : intervals) {
        std::vector<int> block;
        block.reserve(static_cast<std::size_t>(iv.length()));
        for (int x = iv.lo; x <= iv.hi; ++x) block.push_back(x);
        bs.blocks.push_back(std::move(block));
    }
    canonicalize(bs);
    return bs;
}

std::size_t chain_system_count(int n, ChainKind kind) {
    if (n <= 0) fail(errc::parameter, "chain length must be positive");
    // completions[lo][hi]: systems whose last interval so far is [lo, hi]
    std::vector<std::vector<std::size_t>> memo(static_cast<std::size_t>(n),
                                               std::vector<std::size_t>(static_cast<std::size_t>(n), 0));
    for (int lo = n - 1; lo >= 0; --lo) {
        for (int hi = n - 1; hi >= lo; --hi) {
            if (hi == n - 1) {
                memo[lo][hi] = 1;
                continue;
            }
            int lo_min, lo_max;
            next_lo_range(kind, lo, hi, lo_min, lo_max);
            std::size_t total = 0;
            for (int lo2 = lo_min; lo2 <= lo_max && lo2 < n; ++lo2) {
                for (int hi2 = hi + 1; hi2 < n; ++hi2)
                    total = saturating_add(total, memo[lo2][hi2]);
            }
            memo[lo][hi] = total;
        }
    }
    std::size_t total = 0;
    for (int hi = 0; hi < n; ++hi) total = saturating_add(total, memo[0][hi]);
    return total;
}

namespace {

void extend(int n, ChainKind kind, std::vector<ChainInterval>& acc,
            std::vector<ChainBlockSystem>& out) {
    const ChainInterval last = acc.back();
    if (last.hi == n - 1) {
        out.push_back(ChainBlockSystem{n, acc});
        return;
    }
    int lo_min, lo_max;
    next_lo_range(kind, last.lo, last.hi, lo_min, lo_max);
    for (int lo = lo_min; lo <= lo_max && lo < n; ++lo) {
        for (int hi = last.hi + 1; hi < n; ++hi) {
            acc.push_back({lo, hi});
            extend(n, kind, acc, out);
            acc.pop_back();
        }
    }
}

} // namespace

UniversalBlockDistribution enumerate_chain_systems(int n, ChainKind kind) {
    if (n <= 0) fail(errc::parameter, "chain length must be positive");
    std::size_t count = chain_system_count(n, kind);
    if (count > kEnumerationCap)
        fail(errc::capacity, "enumeration of the " + std::to_string(n) + "-chain would yield " +
                                 std::to_string(count) + " systems (cap " +
                                 std::to_string(kEnumerationCap) + ")");

    UniversalBlockDistribution ubd;
    ubd.n = n;
    ubd.kind = kind;
    ubd.systems.reserve(count);
    std::vector<ChainInterval> acc;
    for (int hi = 0; hi < n; ++hi) {
        acc.push_back({0, hi});
        extend(n, kind, acc, ubd.systems);
        acc.pop_back();
    }
    return ubd;
}

UniversalBlockDistribution enumerate_chain_tolerances(int n) {
    return enumerate_chain_systems(n, ChainKind::tolerance);
}

UniversalBlockDistribution enumerate_chain_glued(int n) {
    return enumerate_chain_systems(n, ChainKind::glued);
}

UniversalBlockDistribution enumerate_chain_congruences(int n) {
    return enumerate_chain_systems(n, ChainKind::congruence);
}

namespace {

std::string interval_text(const ChainInterval& iv) {
    return "[" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) + "]";
}

} // namespace

LatticeCheck validate_lattice_blocks(int n, const std::vector<ChainInterval>& intervals) {
    if (n <= 0) fail(errc::parameter, "chain length must be positive");
    for (const auto& iv : intervals) {
        if (iv.lo > iv.hi)
            fail(errc::parameter, "malformed interval " + interval_text(iv));
        if (iv.lo < 0 || iv.hi > n - 1)
            fail(errc::bounds, "interval " + interval_text(iv) + " outside the chain of length " +
                                   std::to_string(n));
    }

    // cover
    std::vector<char> covered(static_cast<std::size_t>(n), 0);
    for (const auto& iv : intervals) {
        for (int x = iv.lo; x <= iv.hi; ++x) covered[static_cast<std::size_t>(x)] = 1;
    }
    for (int x = 0; x < n; ++x) {
        if (!covered[static_cast<std::size_t>(x)])
            return {false, "cover violated: chain element " + std::to_string(x) +
                               " lies in no interval"};
    }

    // equal left endpoints force equal right endpoints
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        for (std::size_t j = i + 1; j < intervals.size(); ++j) {
            if (intervals[i].lo == intervals[j].lo && intervals[i].hi != intervals[j].hi)
                return {false, "left endpoints equal but right endpoints differ: " +
                                   interval_text(intervals[i]) + " and " +
                                   interval_text(intervals[j])};
        }
    }

    // join condition: some interval starts at max of the left endpoints and
    // reaches at least the max of the right endpoints
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        for (std::size_t j = 0; j < intervals.size(); ++j) {
            int join_lo = std::max(intervals[i].lo, intervals[j].lo);
            int join_hi = std::max(intervals[i].hi, intervals[j].hi);
            bool found = false;
            for (const auto& k : intervals) {
                if (k.lo == join_lo && k.hi >= join_hi) {
                    found = true;
                    break;
                }
            }
            if (!found)
                return {false, "join condition violated for " + interval_text(intervals[i]) +
                                   " and " + interval_text(intervals[j]) +
                                   ": no interval starts at " + std::to_string(join_lo) +
                                   " and reaches " + std::to_string(join_hi)};
        }
    }
    return {true, ""};
}

const char* chain_kind_name(ChainKind kind) {
    switch (kind) {
    case ChainKind::tolerance: return "tolerance";
    case ChainKind::glued: return "glued";
    case ChainKind::congruence: return "congruence";
    }
    return "?";
}

ChainKind parse_chain_kind(const std::string& name) {
    if (name == "tolerance") return ChainKind::tolerance;
    if (name == "glued") return ChainKind::glued;
    if (name == "congruence") return ChainKind::congruence;
    fail(errc::parameter, "unknown chain system kind '" + name + "'");
}

void to_json(nlohmann::json& j, const ChainBlockSystem& cbs) {
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& iv : cbs.intervals) intervals.push_back({iv.lo, iv.hi});
    j = nlohmann::json{{"n", cbs.n}, {"intervals", std::move(intervals)}};
}

void from_json(const nlohmann::json& j, ChainBlockSystem& cbs) {
    if (!j.is_object() || !j.contains("n") || !j.contains("intervals"))
        fail(errc::schema, "chain block JSON needs {\"n\": n, \"intervals\": [[lo,hi],...]}");
    cbs = ChainBlockSystem{};
    cbs.n = j["n"].get<int>();
    if (cbs.n <= 0) fail(errc::schema, "chain length must be positive");
    for (const auto& p : j["intervals"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() ||
            !p[1].is_number_integer())
            fail(errc::schema, "each interval must be a two-integer array [lo, hi]");
        ChainInterval iv{p[0].get<int>(), p[1].get<int>()};
        if (iv.lo > iv.hi) fail(errc::schema, "malformed interval " + interval_text(iv));
        if (iv.lo < 0 || iv.hi > cbs.n - 1)
            fail(errc::bounds, "interval " + interval_text(iv) + " outside the chain of length " +
                                   std::to_string(cbs.n));
        cbs.intervals.push_back(iv);
    }
    std::sort(cbs.intervals.begin(), cbs.intervals.end());
}

void to_json(nlohmann::json& j, const UniversalBlockDistribution& ubd) {
    j = nlohmann::json{{"n", ubd.n},
                       {"kind", chain_kind_name(ubd.kind)},
                       {"count", ubd.systems.size()},
                       {"systems", ubd.systems}};
}

} // namespace granule
