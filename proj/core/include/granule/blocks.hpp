#ifndef GRANULE_BLOCKS_HPP
#define GRANULE_BLOCKS_HPP

#include <vector>

#include <nlohmann/json.hpp>

#include "granule/tolerance.hpp"

namespace granule {

/**
 * The blocks (maximal pre-blocks, i.e. maximal cliques) of a tolerance,
 * in canonical order: ascending by least member, then size, then
 * lexicographically. Every block is sorted; blocks cover the universe.
 */
struct BlockSystem {
    int universe_size = 0;
    std::vector<std::vector<int>> blocks;

    bool operator==(const BlockSystem& other) const = default;
};

// Sorts each block and puts the list in canonical order.
void canonicalize(BlockSystem& bs);

// All maximal cliques of t, canonically ordered. Deterministic: the clique
// set of a graph is unique, and the order is canonical.
BlockSystem blocks(const Tolerance& t);

// Union of all blocks containing any given element covers the universe.
bool covers_universe(const BlockSystem& bs);

// {"universe_size": 3, "blocks": [[0,1],[1,2]]}
void to_json(nlohmann::json& j, const BlockSystem& bs);
void from_json(const nlohmann::json& j, BlockSystem& bs);

} // namespace granule

#endif
