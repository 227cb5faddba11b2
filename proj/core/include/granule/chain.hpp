#ifndef GRANULE_CHAIN_HPP
#define GRANULE_CHAIN_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "granule/blocks.hpp"
#include "granule/tolerance.hpp"

namespace granule {

// Inclusive interval [lo, hi] of chain indices.
struct ChainInterval {
    int lo = 0;
    int hi = 0;

    bool contains(int x) const { return lo <= x && x <= hi; }
    int length() const { return hi - lo + 1; }
    bool operator==(const ChainInterval& other) const = default;
    auto operator<=>(const ChainInterval& other) const = default;
};

/**
 * A block system on the chain 0 < 1 < ... < n-1 given as intervals sorted
 * by left endpoint. For a compatible tolerance the intervals satisfy:
 * lo_1 = 0, hi_last = n-1, lo_i < lo_{i+1} <= hi_i + 1, hi_i < hi_{i+1}.
 */
struct ChainBlockSystem {
    int n = 0;
    std::vector<ChainInterval> intervals;

    Tolerance to_tolerance() const;     // x ~ y iff both lie in a common interval
    BlockSystem to_block_system() const; // intervals as sorted index sets

    bool operator==(const ChainBlockSystem& other) const = default;
};

enum class ChainKind {
    tolerance,  // compatible (min/max-preserving) tolerances
    glued,      // consecutive blocks overlap: lo_{i+1} <= hi_i
    congruence, // blocks partition the chain: lo_{i+1} = hi_i + 1
};

/**
 * Every block system of the named kind on the n-chain, in lexicographic
 * order of the interval list. Tolerance counts follow the Catalan numbers
 * (1, 2, 5, 14, 42, ... for n = 1, 2, 3, 4, 5, ...); congruences number
 * 2^(n-1).
 */
struct UniversalBlockDistribution {
    int n = 0;
    ChainKind kind = ChainKind::tolerance;
    std::vector<ChainBlockSystem> systems;
};

UniversalBlockDistribution enumerate_chain_systems(int n, ChainKind kind);
UniversalBlockDistribution enumerate_chain_tolerances(int n);
UniversalBlockDistribution enumerate_chain_glued(int n);
UniversalBlockDistribution enumerate_chain_congruences(int n);

// Closed-form counts, saturating at SIZE_MAX on overflow; used for capacity
// checks before enumerating.
std::size_t chain_system_count(int n, ChainKind kind);

/**
 * Checks the lattice block-system conditions for a family of intervals on
 * the n-chain (join = max, meet = min): the family covers the chain; equal
 * left endpoints force equal right endpoints; and for every two intervals
 * some interval starts at the join of their left endpoints and reaches at
 * least the join of their right endpoints. Reports the first violation.
 */
struct LatticeCheck {
    bool ok = true;
    std::string violation; // empty when ok
};

LatticeCheck validate_lattice_blocks(int n, const std::vector<ChainInterval>& intervals);

const char* chain_kind_name(ChainKind kind);
ChainKind parse_chain_kind(const std::string& name);

// {"n": 5, "intervals": [[0,2],[2,4]]}
void to_json(nlohmann::json& j, const ChainBlockSystem& cbs);
void from_json(const nlohmann::json& j, ChainBlockSystem& cbs);
void to_json(nlohmann::json& j, const UniversalBlockDistribution& ubd);

} // namespace granule

#endif
