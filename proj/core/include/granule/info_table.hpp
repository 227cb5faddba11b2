#ifndef GRANULE_INFO_TABLE_HPP
#define GRANULE_INFO_TABLE_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "granule/value.hpp"

namespace granule {

/**
 * An information table: objects x attributes with set-valued cells.
 * Cells are singletons in a deterministic (complete) table; a cell with
 * more than one value makes the table indeterministic. The table is
 * immutable after load, so every operation on it is a pure read.
 */
struct InformationTable {
    std::vector<std::string> objects;
    std::vector<std::string> attributes;
    // valuation[attribute][object]; every cell is a nonempty ValueSet.
    std::vector<std::vector<ValueSet>> valuation;
    std::string decision_attribute; // empty when none is designated
    // Optional explicit value orders from a sidecar file, attribute -> values
    // listed from smallest to largest. Overrides the default ordering.
    std::map<std::string, std::vector<Value>> value_orders;

    int object_count() const { return static_cast<int>(objects.size()); }
    int attribute_count() const { return static_cast<int>(attributes.size()); }

    int object_index(const std::string& id) const;
    int attribute_index(const std::string& id) const;
    bool has_attribute(const std::string& id) const;
    bool has_decision() const { return !decision_attribute.empty(); }

    const ValueSet& cell(int attribute, int object) const;
    // The unique value of a singleton cell; determinism error otherwise.
    const Value& single(int attribute, int object) const;

    // All attribute indices except the decision attribute, in table order.
    std::vector<int> conditional_attributes() const;
};

struct LoadOptions {
    char delimiter = ',';
    std::string decision_column;        // empty: no decision attribute
    std::string indeterminacy_separator = "|";
};

// Parses a CSV stream with a header row. The first column holds object
// identifiers; the remaining columns become attributes. A cell containing
// the indeterminacy separator splits into a multi-element valuation.
InformationTable load_table(std::istream& in, const LoadOptions& options = {});
InformationTable load_table_file(const std::string& path, const LoadOptions& options = {});

// Sidecar value-order file: one line per attribute, `attr: v1 < v2 < ...`.
void load_value_order(std::istream& in, InformationTable& table);
void load_value_order_file(const std::string& path, InformationTable& table);

bool is_deterministic(const InformationTable& table);

/** Dense ranks of one deterministic column: ties share a rank, and the
 *  induced chain has one element per distinct value. */
struct ColumnRank {
    std::vector<int> rank;      // indexed by object position
    std::vector<Value> values;  // indexed by rank, ascending in column order

    int chain_size() const { return static_cast<int>(values.size()); }
};

ColumnRank column_rank(const InformationTable& table, const std::string& attribute);

enum class Ordering { lt, eq, gt, incomparable };

const char* ordering_name(Ordering o);

// Lexicographic comparison of two objects' valuation tuples along
// attr_order (a permutation of a subset of the attributes).
Ordering lex_compare(const InformationTable& table, const std::string& x,
                     const std::string& w, const std::vector<std::string>& attr_order);

// Coordinatewise comparison over all conditional attributes: lt/gt when one
// tuple dominates the other, eq when equal, incomparable otherwise.
Ordering product_compare(const InformationTable& table, const std::string& x,
                         const std::string& w);

/**
 * Classified difference between two tables. `kinds` lists the applicable
 * tags in canonical order (object changes, attribute changes, value
 * changes); a transition touching several categories reports one tag per
 * category, e.g. {"O-", "At+"}.
 */
struct ChangeSet {
    std::vector<std::string> kinds; // drawn from O+ O- O± At+ At- At± V+
    std::vector<std::string> added_objects;
    std::vector<std::string> removed_objects;
    std::vector<std::string> added_attributes;
    std::vector<std::string> removed_attributes;
    std::vector<std::pair<std::string, std::string>> modified_cells; // (attribute, object)

    bool empty() const { return kinds.empty(); }
};

// Classifies the transition t1 -> t2. Object identity is identifier
// equality; renames appear as a deletion plus an addition.
ChangeSet diff_tables(const InformationTable& t1, const InformationTable& t2);

void to_json(nlohmann::json& j, const ChangeSet& c);
void from_json(const nlohmann::json& j, ChangeSet& c);

} // namespace granule

#endif
