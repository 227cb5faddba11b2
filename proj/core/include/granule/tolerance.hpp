#ifndef GRANULE_TOLERANCE_HPP
#define GRANULE_TOLERANCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "granule/errors.hpp"
#include "granule/info_table.hpp"

namespace granule {

/**
 * A tolerance: reflexive symmetric boolean relation over elements
 * 0..size-1, stored as a dense symmetric matrix. The diagonal is fixed
 * true; set() keeps the matrix symmetric.
 */
class Tolerance {
public:
    Tolerance() = default;
    explicit Tolerance(int size);

    static Tolerance identity(int size) { return Tolerance(size); }
    static Tolerance total(int size);

    int size() const { return size_; }

    bool related(int i, int j) const {
        check_index(i);
        check_index(j);
        return cells_[static_cast<size_t>(i) * size_ + j] != 0;
    }

    void set(int i, int j, bool value = true);

    bool operator==(const Tolerance& other) const = default;

private:
    void check_index(int i) const {
        if (i < 0 || i >= size_)
            fail(errc::bounds, "element index " + std::to_string(i) + " outside universe of " +
                                   std::to_string(size_));
    }

    int size_ = 0;
    std::vector<std::uint8_t> cells_;
};

enum class DistanceKind {
    absolute_difference,
    normalized_absolute_difference,
    discrete,
    user_table,
};

enum class ToleranceVariant {
    sum,   // rho(a,b) + rho(b,a) <= epsilon
    ratio, // s/(1+s) <= epsilon with s the symmetrized sum; requires epsilon < 1
};

/**
 * How one attribute's values induce a tolerance over objects. The built-in
 * distances cover the common cases; `user_table` accepts an explicit
 * (possibly asymmetric) distance matrix indexed by object position.
 */
struct DistanceSpec {
    std::string attribute;
    DistanceKind kind = DistanceKind::absolute_difference;
    double epsilon = 0.0;
    ToleranceVariant variant = ToleranceVariant::sum;
    std::vector<std::vector<double>> table; // user_table only; zero diagonal

    void validate() const;
};

// Builds the tolerance the spec'd inequality induces on `values`:
// a related to b iff the variant's inequality holds on the symmetrized
// distance. For user_table, `values` only fixes the object count and may
// be empty.
Tolerance tolerance_from_distance(const std::vector<Value>& values, const DistanceSpec& spec);

enum class Combine { conjunction, disjunction, at_least };

struct CombineMode {
    Combine kind = Combine::conjunction;
    int k = 0; // at_least only

    static CombineMode conjunction() { return {Combine::conjunction, 0}; }
    static CombineMode disjunction() { return {Combine::disjunction, 0}; }
    static CombineMode at_least(int k) { return {Combine::at_least, k}; }
};

Tolerance combine_tolerances(const std::vector<Tolerance>& ts, const CombineMode& mode);

// Per-attribute tolerances combined into one relation over the table's
// objects; equals combine_tolerances over tolerance_from_distance results.
Tolerance similarity_matrix(const InformationTable& table,
                            const std::vector<DistanceSpec>& specs, const CombineMode& mode);

// Tolerance over the row-major index product of the factor universes:
// two tuples are related iff every coordinate pair is related.
Tolerance product_tolerance(const std::vector<Tolerance>& factors);

// Decodes a row-major product index into per-factor coordinates.
std::vector<int> product_coordinates(std::size_t index, const std::vector<int>& factor_sizes);

// True iff T is preserved by min and max on the chain 0..n-1:
// Tab and Tcd imply T(min(a,c))(min(b,d)) and T(max(a,c))(max(b,d)).
bool is_compatible_tolerance(int n, const Tolerance& t);

// K^2 subseteq T: every pair of members is related.
bool is_pre_block(const Tolerance& t, const std::vector<int>& k);

// Pre-block with no strict pre-block superset.
bool is_block(const Tolerance& t, const std::vector<int>& k);

// Adjacency-list form: {"size": 3, "pairs": [[0,1],[1,2]]}, diagonal implicit.
void to_json(nlohmann::json& j, const Tolerance& t);
void from_json(const nlohmann::json& j, Tolerance& t);

void to_json(nlohmann::json& j, const DistanceSpec& spec);
void from_json(const nlohmann::json& j, DistanceSpec& spec);

void to_json(nlohmann::json& j, const CombineMode& mode);
void from_json(const nlohmann::json& j, CombineMode& mode);

} // namespace granule

#endif
