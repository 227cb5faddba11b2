#ifndef GRANULE_APPROXIMATION_HPP
#define GRANULE_APPROXIMATION_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "granule/blocks.hpp"

namespace granule {

/**
 * Granular approximations of a query set relative to a block system:
 * the lower approximation is the union of blocks inside the query, the
 * upper the union of blocks meeting it. Block indices record provenance.
 */
struct GranularApproximation {
    std::vector<int> query;
    std::vector<int> lower;
    std::vector<int> upper;
    std::vector<int> lower_blocks; // indices into the block system
    std::vector<int> upper_blocks;

    bool definite() const { return lower == upper; }
};

GranularApproximation approximate(const BlockSystem& bs, const std::vector<int>& query);
std::vector<int> lower_approximation(const BlockSystem& bs, const std::vector<int>& query);
std::vector<int> upper_approximation(const BlockSystem& bs, const std::vector<int>& query);

// Degree to which a is included in b: |b \ a| / |b|, the share of b missed
// by a (0 = b inside a). Undefined for empty b.
double xi5(const std::vector<int>& a, const std::vector<int>& b);

// |lower| / |upper| over the block system; 1 for the empty query.
double accuracy(const BlockSystem& bs, const std::vector<int>& query);

// Fraction of objects lying in some block that is pure for its class,
// given a class id per object.
double decision_gamma(const BlockSystem& bs, const std::vector<int>& class_of_object);

/**
 * How rough-object spaces over a block system are enumerated: subsets of
 * the universe are swept exhaustively up to `exhaustive_bound` elements;
 * beyond that, sampling must be requested explicitly and results carry the
 * seed. Membership in F (the non-definite complement) is only certified by
 * the exhaustive sweep.
 */
struct EnumerationOptions {
    int exhaustive_bound = 16;
    bool sample = false;
    std::uint64_t seed = 0;
    std::size_t sample_count = 4096;
};

struct RoughPair {
    std::vector<int> lower;
    std::vector<int> upper;

    bool operator==(const RoughPair& other) const = default;
    auto operator<=>(const RoughPair& other) const = default;
};

enum class RoughKind {
    e1, // distinct (lower, upper) pairs over all subsets
    e2, // sets equal to their own upper approximation
    f,  // subsets that arise as no lower or upper approximation
};

struct RoughObjectSpace {
    RoughKind kind = RoughKind::e1;
    bool exhaustive = true;
    std::uint64_t seed = 0;
    std::vector<RoughPair> pairs;            // e1
    std::vector<std::vector<int>> sets;      // e2 / f
};

RoughObjectSpace rough_object_space(const BlockSystem& bs, RoughKind kind,
                                    const EnumerationOptions& options = {});
std::vector<RoughPair> rough_pairs(const BlockSystem& bs, const EnumerationOptions& options = {});

// All distinct approximations (both lower and upper images), sorted.
std::vector<std::vector<int>> approximation_space(const BlockSystem& bs,
                                                  const EnumerationOptions& options = {});

// Minimal (componentwise-inclusion) rough pair whose components both
// contain a; partial: a must itself be an approximation of something.
// Ties resolve to the smallest upper component, then smallest lower,
// then lexicographically.
RoughPair minimal_cover_pair(const BlockSystem& bs, const std::vector<int>& a,
                             const EnumerationOptions& options = {});

/**
 * Registry of rough-reasoning functions. Types fix the shape of inputs
 * and outputs: pair-valued set maps (type 1), real-valued set functionals
 * (type 2), collection-valued maps (type 3), and approximation-operator
 * transforms (type h). Evaluation checks the declared codomain contract.
 */
enum class RrfType { type1, type2, type3, type_h };

struct RrfDescriptor {
    std::string name;
    RrfType type = RrfType::type2;
    std::string domain;   // human-readable domain description
    std::string codomain; // human-readable codomain description
    bool partial = false;
};

struct RrfInput {
    std::vector<int> a;
    std::vector<int> b;    // second argument for binary functionals
    bool has_b = false;
    char approx_op = 0;    // 'l' or 'u' for type-h transforms
};

using RrfValue = std::variant<double, RoughPair, std::vector<std::vector<int>>, nlohmann::json>;

class RrfRegistry {
public:
    using Fn = std::function<RrfValue(const RrfInput&)>;

    void add(RrfDescriptor descriptor, Fn fn);
    bool contains(const std::string& name) const;
    const RrfDescriptor& descriptor(const std::string& name) const;
    std::vector<std::string> names() const;

    // Runs the function and checks the output against the declared type:
    // type 1 must yield a rough pair with lower inside upper, type 2 a
    // finite real, type 3 a collection, type h a structured report. A
    // violation is a contract error; domain failures of partial functions
    // surface as domain errors.
    RrfValue evaluate(const std::string& name, const RrfInput& input) const;

private:
    std::map<std::string, std::pair<RrfDescriptor, Fn>> entries_;
};

// Registry over one block system: "xi5" and "accuracy" (type 2),
// "minimal-cover" (partial type 1), "definite-sets" (type 3).
RrfRegistry default_rrf_registry(const BlockSystem& bs, const EnumerationOptions& options = {});

void to_json(nlohmann::json& j, const GranularApproximation& g);
void from_json(const nlohmann::json& j, GranularApproximation& g);
void to_json(nlohmann::json& j, const RoughPair& p);
void from_json(const nlohmann::json& j, RoughPair& p);
void to_json(nlohmann::json& j, const RoughObjectSpace& space);
void to_json(nlohmann::json& j, const RrfDescriptor& d);

} // namespace granule

#endif
