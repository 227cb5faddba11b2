#include "granule/info_table.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace granule {

Value parse_value(const std::string& token) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    double parsed = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, parsed);
    if (ec == std::errc() && ptr == end && !token.empty())
        return Value(parsed);
    return Value(token);
}

std::string format_value(const Value& v) {
    nlohmann::json j;
    to_json(j, v);
    if (j.is_string())
        return j.get<std::string>();
    return j.dump();
}

void to_json(nlohmann::json& j, const Value& v) {
    if (is_number(v))
        j = std::get<double>(v);
    else
        j = std::get<std::string>(v);
}

void from_json(const nlohmann::json& j, Value& v) {
    if (j.is_number())
        v = j.get<double>();
    else if (j.is_string())
        v = j.get<std::string>();
    else
        fail(errc::schema, "value must be a number or a string");
}

void normalize_value_set(ValueSet& s) {
    std::sort(s.begin(), s.end(), value_less_canonical);
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

int InformationTable::object_index(const std::string& id) const {
    auto it = std::find(objects.begin(), objects.end(), id);
    if (it == objects.end())
        fail(errc::bounds, "unknown object: " + id);
    return static_cast<int>(it - objects.begin());
}

int InformationTable::attribute_index(const std::string& id) const {
    auto it = std::find(attributes.begin(), attributes.end(), id);
    if (it == attributes.end())
        fail(errc::bounds, "unknown attribute: " + id);
    return static_cast<int>(it - attributes.begin());
}

bool InformationTable::has_attribute(const std::string& id) const {
    return std::find(attributes.begin(), attributes.end(), id) != attributes.end();
}

const ValueSet& InformationTable::cell(int attribute, int object) const {
    if (attribute < 0 || attribute >= attribute_count())
        fail(errc::bounds, "attribute index out of range");
    if (object < 0 || object >= object_count())
        fail(errc::bounds, "object index out of range");
    return valuation[attribute][object];
}

const Value& InformationTable::single(int attribute, int object) const {
    const ValueSet& s = cell(attribute, object);
    if (s.size() != 1)
        fail(errc::determinism,
             "indeterminate cell (" + attributes[attribute] + ", " + objects[object] + ")");
    return s.front();
}

std::vector<int> InformationTable::conditional_attributes() const {
    std::vector<int> result;
    for (int a = 0; a < attribute_count(); ++a)
        if (attributes[a] != decision_attribute)
            result.push_back(a);
    return result;
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Splits one CSV record. Fields may be double-quoted; a doubled quote
// inside a quoted field is an escaped quote.
std::vector<std::string> split_csv_line(const std::string& line, char delimiter, int line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == delimiter) {
            fields.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted)
        fail(errc::parse, "unterminated quote on line " + std::to_string(line_no));
    fields.push_back(field);
    return fields;
}

ValueSet parse_cell(const std::string& raw, const std::string& separator,
                    int line_no, const std::string& column) {
    ValueSet values;
    std::string text = trim(raw);
    size_t start = 0;
    while (true) {
        size_t pos = separator.empty() ? std::string::npos : text.find(separator, start);
        std::string part = trim(text.substr(start, pos == std::string::npos
                                                       ? std::string::npos
                                                       : pos - start));
        if (part.empty())
            fail(errc::parse, "empty value in column '" + column + "' on line " +
                                  std::to_string(line_no));
        values.push_back(parse_value(part));
        if (pos == std::string::npos)
            break;
        start = pos + separator.size();
    }
    normalize_value_set(values);
    return values;
}

} // namespace

InformationTable load_table(std::istream& in, const LoadOptions& options) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line))
        fail(errc::schema, "empty input: missing header row");
    ++line_no;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();

    std::vector<std::string> header = split_csv_line(line, options.delimiter, line_no);
    if (header.size() < 2)
        fail(errc::schema, "header must name an id column and at least one attribute");

    InformationTable table;
    for (size_t i = 1; i < header.size(); ++i) {
        std::string name = trim(header[i]);
        if (name.empty())
            fail(errc::schema, "empty attribute name in header");
        if (table.has_attribute(name))
            fail(errc::schema, "duplicate attribute name: " + name);
        table.attributes.push_back(name);
    }
    table.valuation.assign(table.attributes.size(), {});

    std::set<std::string> seen_objects;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> fields = split_csv_line(line, options.delimiter, line_no);
        if (fields.size() != header.size())
            fail(errc::parse, "row on line " + std::to_string(line_no) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(header.size()));
        std::string id = trim(fields[0]);
        if (id.empty())
            fail(errc::parse, "empty object id on line " + std::to_string(line_no));
        if (!seen_objects.insert(id).second)
            fail(errc::schema, "duplicate object id: " + id);
        table.objects.push_back(id);
        for (size_t i = 1; i < fields.size(); ++i)
            table.valuation[i - 1].push_back(parse_cell(
                fields[i], options.indeterminacy_separator, line_no, table.attributes[i - 1]));
    }

    if (table.objects.empty())
        fail(errc::schema, "table has no objects");

    if (!options.decision_column.empty()) {
        if (!table.has_attribute(options.decision_column))
            fail(errc::schema, "decision column not found: " + options.decision_column);
        table.decision_attribute = options.decision_column;
    }
    return table;
}

InformationTable load_table_file(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in)
        fail(errc::io, "cannot open table file: " + path);
    return load_table(in, options);
}

void load_value_order(std::istream& in, InformationTable& table) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (trim(line).empty())
            continue;
        size_t colon = line.find(':');
        if (colon == std::string::npos)
            fail(errc::parse, "value-order line " + std::to_string(line_no) +
                                  " is missing 'attr:'");
        std::string attr = trim(line.substr(0, colon));
        if (!table.has_attribute(attr))
            fail(errc::schema, "value-order names unknown attribute: " + attr);
        std::vector<Value> order;
        std::string rest = line.substr(colon + 1);
        size_t start = 0;
        while (start <= rest.size()) {
            size_t pos = rest.find('<', start);
            std::string token = trim(rest.substr(start, pos == std::string::npos
                                                             ? std::string::npos
                                                             : pos - start));
            if (token.empty())
                fail(errc::parse, "empty value in value-order line " + std::to_string(line_no));
            order.push_back(parse_value(token));
            if (pos == std::string::npos)
                break;
            start = pos + 1;
        }
        for (size_t i = 0; i < order.size(); ++i)
            for (size_t j = i + 1; j < order.size(); ++j)
                if (order[i] == order[j])
                    fail(errc::schema, "value-order for " + attr + " repeats a value");
        table.value_orders[attr] = std::move(order);
    }
}

void load_value_order_file(const std::string& path, InformationTable& table) {
    std::ifstream in(path);
    if (!in)
        fail(errc::io, "cannot open value-order file: " + path);
    load_value_order(in, table);
}

bool is_deterministic(const InformationTable& table) {
    for (const auto& column : table.valuation)
        for (const auto& cell : column)
            if (cell.size() != 1)
                return false;
    return true;
}

namespace {

// Comparison of two values within one column, honoring a custom order
// when the table carries one for that attribute.
int compare_in_column(const InformationTable& table, const std::string& attribute,
                      const Value& a, const Value& b) {
    auto it = table.value_orders.find(attribute);
    if (it == table.value_orders.end())
        return compare_values(a, b);
    const std::vector<Value>& order = it->second;
    auto position = [&](const Value& v) {
        auto p = std::find(order.begin(), order.end(), v);
        if (p == order.end())
            fail(errc::ordering, "value " + format_value(v) +
                                     " not listed in the value order for " + attribute);
        return p - order.begin();
    };
    auto pa = position(a), pb = position(b);
    return pa < pb ? -1 : (pa > pb ? 1 : 0);
}

} // namespace

ColumnRank column_rank(const InformationTable& table, const std::string& attribute) {
    int a = table.attribute_index(attribute);
    int r = table.object_count();

    std::vector<Value> distinct;
    for (int x = 0; x < r; ++x) {
        const Value& v = table.single(a, x);
        if (std::find(distinct.begin(), distinct.end(), v) == distinct.end())
            distinct.push_back(v);
    }
    std::sort(distinct.begin(), distinct.end(), [&](const Value& u, const Value& v) {
        return compare_in_column(table, attribute, u, v) < 0;
    });

    ColumnRank result;
    result.values = std::move(distinct);
    result.rank.resize(r);
    for (int x = 0; x < r; ++x) {
        const Value& v = table.single(a, x);
        auto it = std::find(result.values.begin(), result.values.end(), v);
        result.rank[x] = static_cast<int>(it - result.values.begin());
    }
    return result;
}

const char* ordering_name(Ordering o) {
    switch (o) {
    case Ordering::lt: return "LT";
    case Ordering::eq: return "EQ";
    case Ordering::gt: return "GT";
    case Ordering::incomparable: return "INCOMPARABLE";
    }
    return "?";
}

Ordering lex_compare(const InformationTable& table, const std::string& x,
                     const std::string& w, const std::vector<std::string>& attr_order) {
    for (size_t i = 0; i < attr_order.size(); ++i)
        for (size_t j = i + 1; j < attr_order.size(); ++j)
            if (attr_order[i] == attr_order[j])
                fail(errc::parameter, "attribute listed twice: " + attr_order[i]);
    int xi = table.object_index(x);
    int wi = table.object_index(w);
    for (const std::string& attribute : attr_order) {
        int a = table.attribute_index(attribute);
        int c = compare_in_column(table, attribute, table.single(a, xi), table.single(a, wi));
        if (c < 0)
            return Ordering::lt;
        if (c > 0)
            return Ordering::gt;
    }
    return Ordering::eq;
}

Ordering product_compare(const InformationTable& table, const std::string& x,
                         const std::string& w) {
    int xi = table.object_index(x);
    int wi = table.object_index(w);
    bool some_less = false, some_greater = false;
    for (int a : table.conditional_attributes()) {
        int c = compare_in_column(table, table.attributes[a], table.single(a, xi),
                                  table.single(a, wi));
        if (c < 0)
            some_less = true;
        else if (c > 0)
            some_greater = true;
    }
    if (some_less && some_greater)
        return Ordering::incomparable;
    if (some_less)
        return Ordering::lt;
    if (some_greater)
        return Ordering::gt;
    return Ordering::eq;
}

ChangeSet diff_tables(const InformationTable& t1, const InformationTable& t2) {
    ChangeSet c;
    auto sorted = [](std::vector<std::string> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    std::vector<std::string> o1 = sorted(t1.objects), o2 = sorted(t2.objects);
    std::vector<std::string> a1 = sorted(t1.attributes), a2 = sorted(t2.attributes);

    std::set_difference(o2.begin(), o2.end(), o1.begin(), o1.end(),
                        std::back_inserter(c.added_objects));
    std::set_difference(o1.begin(), o1.end(), o2.begin(), o2.end(),
                        std::back_inserter(c.removed_objects));
    std::set_difference(a2.begin(), a2.end(), a1.begin(), a1.end(),
                        std::back_inserter(c.added_attributes));
    std::set_difference(a1.begin(), a1.end(), a2.begin(), a2.end(),
                        std::back_inserter(c.removed_attributes));

    std::vector<std::string> common_attrs, common_objs;
    std::set_intersection(a1.begin(), a1.end(), a2.begin(), a2.end(),
                          std::back_inserter(common_attrs));
    std::set_intersection(o1.begin(), o1.end(), o2.begin(), o2.end(),
                          std::back_inserter(common_objs));
    for (const std::string& attr : common_attrs) {
        int ai1 = t1.attribute_index(attr), ai2 = t2.attribute_index(attr);
        for (const std::string& obj : common_objs) {
            int oi1 = t1.object_index(obj), oi2 = t2.object_index(obj);
            if (t1.valuation[ai1][oi1] != t2.valuation[ai2][oi2])
                c.modified_cells.emplace_back(attr, obj);
        }
    }

    if (!c.added_objects.empty() && !c.removed_objects.empty())
        c.kinds.push_back("O±");
    else if (!c.added_objects.empty())
        c.kinds.push_back("O+");
    else if (!c.removed_objects.empty())
        c.kinds.push_back("O-");
    if (!c.added_attributes.empty() && !c.removed_attributes.empty())
        c.kinds.push_back("At±");
    else if (!c.added_attributes.empty())
        c.kinds.push_back("At+");
    else if (!c.removed_attributes.empty())
        c.kinds.push_back("At-");
    if (!c.modified_cells.empty())
        c.kinds.push_back("V+");
    return c;
}

void to_json(nlohmann::json& j, const ChangeSet& c) {
    j = nlohmann::json{{"kinds", c.kinds},
                       {"added_objects", c.added_objects},
                       {"removed_objects", c.removed_objects},
                       {"added_attributes", c.added_attributes},
                       {"removed_attributes", c.removed_attributes}};
    auto cells = nlohmann::json::array();
    for (const auto& [attr, obj] : c.modified_cells)
        cells.push_back(nlohmann::json::array({attr, obj}));
    j["modified_cells"] = cells;
}

void from_json(const nlohmann::json& j, ChangeSet& c) {
    c.kinds = j.at("kinds").get<std::vector<std::string>>();
    c.added_objects = j.at("added_objects").get<std::vector<std::string>>();
    c.removed_objects = j.at("removed_objects").get<std::vector<std::string>>();
    c.added_attributes = j.at("added_attributes").get<std::vector<std::string>>();
    c.removed_attributes = j.at("removed_attributes").get<std::vector<std::string>>();
    c.modified_cells.clear();
    for (const auto& cell : j.at("modified_cells"))
        c.modified_cells.emplace_back(cell.at(0).get<std::string>(),
                                      cell.at(1).get<std::string>());
}

} // namespace granule
