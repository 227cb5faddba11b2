#include "granule/blocks.hpp"

#include <algorithm>
#include <numeric>

namespace granule {

namespace {

struct CliqueFinder {
    const Tolerance& t;
    std::vector<std::vector<int>>& out;

    bool adjacent(int a, int b) const { return a != b && t.related(a, b); }

    // Bron-Kerbosch with pivoting. P and X are sorted vectors.
    void expand(std::vector<int>& r, std::vector<int> p, std::vector<int> x) {
        if (p.empty() && x.empty()) {
            out.push_back(r);
            return;
        }
        // pivot: vertex of P u X with the most neighbours in P
        int pivot = -1;
        std::size_t best = 0;
        auto consider = [&](int u) {
            std::size_t cnt = 0;
            for (int v : p)
                if (adjacent(u, v)) ++cnt;
            if (pivot < 0 || cnt > best) {
                pivot = u;
                best = cnt;
            }
        };
        for (int u : p) consider(u);
        for (int u : x) consider(u);

        std::vector<int> frontier;
        for (int v : p)
            if (!adjacent(pivot, v)) frontier.push_back(v);

        for (int v : frontier) {
            std::vector<int> p2, x2;
            for (int w : p)
                if (adjacent(v, w)) p2.push_back(w);
            for (int w : x)
                if (adjacent(v, w)) x2.push_back(w);
            r.push_back(v);
            expand(r, std::move(p2), std::move(x2));
            r.pop_back();
            p.erase(std::find(p.begin(), p.end(), v));
            auto it = std::lower_bound(x.begin(), x.end(), v);
            x.insert(it, v);
        }
    }
};

// Vertices ordered by repeated minimum-degree removal; keeps the recursion
// shallow on large sparse relations.
std::vector<int> degeneracy_order(const Tolerance& t) {
    const int n = t.size();
    std::vector<int> degree(n, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (i != j && t.related(i, j)) ++degree[i];
    }
    std::vector<char> removed(n, 0);
    std::vector<int> order;
    order.reserve(n);
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v) {
            if (removed[v]) continue;
            if (best < 0 || degree[v] < degree[best]) best = v;
        }
        order.push_back(best);
        removed[best] = 1;
        for (int v = 0; v < n; ++v) {
            if (!removed[v] && v != best && t.related(v, best)) --degree[v];
        }
    }
    return order;
}

} // namespace

void canonicalize(BlockSystem& bs) {
    for (auto& b : bs.blocks) std::sort(b.begin(), b.end());
    std::sort(bs.blocks.begin(), bs.blocks.end(), [](const auto& a, const auto& b) {
        int fa = a.empty() ? -1 : a.front();
        int fb = b.empty() ? -1 : b.front();
        if (fa != fb) return fa < fb;
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    bs.blocks.erase(std::unique(bs.blocks.begin(), bs.blocks.end()), bs.blocks.end());
}

BlockSystem blocks(const Tolerance& t) {
    BlockSystem bs;
    bs.universe_size = t.size();
    if (t.size() == 0) return bs;

    CliqueFinder finder{t, bs.blocks};
    const int n = t.size();
    if (n <= 256) {
        std::vector<int> all(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), 0);
        std::vector<int> r;
        finder.expand(r, std::move(all), {});
    } else {
        auto order = degeneracy_order(t);
        std::vector<int> position(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) position[static_cast<std::size_t>(order[i])] = i;
        for (int i = 0; i < n; ++i) {
            int v = order[i];
            std::vector<int> p, x;
            for (int w = 0; w < n; ++w) {
                if (w == v || !t.related(v, w)) continue;
                (position[static_cast<std::size_t>(w)] > i ? p : x).push_back(w);
            }
            std::sort(p.begin(), p.end());
            std::sort(x.begin(), x.end());
            std::vector<int> r{v};
            finder.expand(r, std::move(p), std::move(x));
        }
    }
    canonicalize(bs);
    return bs;
}

bool covers_universe(const BlockSystem& bs) {
    std::vector<char> seen(static_cast<std::size_t>(bs.universe_size), 0);
    for (const auto& b : bs.blocks) {
        for (int v : b) {
            if (v < 0 || v >= bs.universe_size) return false;
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

void to_json(nlohmann::json& j, const BlockSystem& bs) {
    j = nlohmann::json{{"universe_size", bs.universe_size}, {"blocks", bs.blocks}};
}

void from_json(const nlohmann::json& j, BlockSystem& bs) {
    if (!j.is_object() || !j.contains("universe_size") || !j.contains("blocks"))
        fail(errc::schema, "block system JSON needs {\"universe_size\": n, \"blocks\": [[...]]}");
    bs = BlockSystem{};
    bs.universe_size = j["universe_size"].get<int>();
    if (bs.universe_size < 0) fail(errc::schema, "universe_size must be non-negative");
    for (const auto& b : j["blocks"]) {
        std::vector<int> block = b.get<std::vector<int>>();
        for (int v : block) {
            if (v < 0 || v >= bs.universe_size)
                fail(errc::bounds, "block member " + std::to_string(v) +
                                       " outside universe of " + std::to_string(bs.universe_size));
        }
        bs.blocks.push_back(std::move(block));
    }
    canonicalize(bs);
}

} // namespace granule
