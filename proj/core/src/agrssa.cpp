#include "granule/agrssa.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace granule {

// ---------------------------------------------------------------------------
// Boundaries
// ---------------------------------------------------------------------------

std::vector<double> BoundarySpec::boundaries() const {
    std::vector<double> flat;
    flat.push_back(bottom);
    for (const auto& cut : cuts) {
        flat.push_back(cut.lo);
        flat.push_back(cut.hi);
    }
    flat.push_back(top);
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    return flat;
}

namespace {

double population_std_dev(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return std::sqrt(var / static_cast<double>(values.size()));
}

// Averaging nearest-rank quantile (sorted input, 0 < p < 1): the value at
// rank ceil(p*N), or the midpoint of ranks p*N and p*N+1 when p*N lands on
// an integer.
double rank_quantile(const std::vector<double>& sorted, double p) {
    const double n = static_cast<double>(sorted.size());
    double h = p * n;
    double nearest = std::round(h);
    if (std::abs(h - nearest) < 1e-9 && nearest >= 1.0 && nearest < n) {
        std::size_t k = static_cast<std::size_t>(nearest);
        return 0.5 * (sorted[k - 1] + sorted[k]);
    }
    auto k = static_cast<std::size_t>(std::ceil(h - 1e-9));
    k = std::clamp<std::size_t>(k, 1, sorted.size());
    return sorted[k - 1];
}

} // namespace

BoundarySpec quantile_boundaries(const std::string& attribute, const std::vector<double>& values,
                                 int q, EMode e_mode, double e_fraction) {
    if (values.empty()) fail(errc::parameter, "quantile boundaries need a nonempty column");
    for (double v : values) {
        if (!std::isfinite(v))
            fail(errc::numeric, "column '" + attribute + "' contains a non-finite value");
    }
    if (q < 1) fail(errc::parameter, "the number of quantile cuts must be at least 1");
    if (!std::isfinite(e_fraction) || e_fraction < 0.0)
        fail(errc::parameter, "e_fraction must be finite and non-negative");

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    std::size_t distinct = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] != sorted[i - 1]) ++distinct;
    }
    if (distinct < 2)
        fail(errc::degenerate_column, "column '" + attribute + "' is constant");
    if (static_cast<std::size_t>(q) >= distinct)
        fail(errc::parameter, "column '" + attribute + "' has only " + std::to_string(distinct) +
                                  " distinct values; " + std::to_string(q) +
                                  " quantile cuts need more");

    BoundarySpec spec;
    spec.attribute = attribute;
    spec.q = q;
    spec.e_mode = e_mode;
    spec.e_fraction = e_fraction;
    spec.bottom = sorted.front();
    spec.top = sorted.back();

    std::vector<double> centres;
    centres.reserve(static_cast<std::size_t>(q));
    for (int j = 1; j <= q; ++j)
        centres.push_back(rank_quantile(sorted, static_cast<double>(j) / (q + 1)));

    const double global_sd = population_std_dev(sorted);
    for (int j = 0; j < q; ++j) {
        BoundaryCut cut;
        cut.q = centres[static_cast<std::size_t>(j)];
        switch (e_mode) {
        case EMode::global_std_fraction: cut.e = e_fraction * global_sd; break;
        case EMode::local_std_fraction: {
            double left = j > 0 ? centres[static_cast<std::size_t>(j - 1)] : spec.bottom;
            double right = j + 1 < q ? centres[static_cast<std::size_t>(j + 1)] : spec.top;
            std::vector<double> window;
            for (double v : sorted) {
                if (v >= left && v <= right) window.push_back(v);
            }
            cut.e = e_fraction * population_std_dev(window);
            break;
        }
        case EMode::fixed: cut.e = e_fraction; break;
        }
        cut.lo = std::max(cut.q - cut.e, spec.bottom);
        cut.hi = std::min(cut.q + cut.e, spec.top);
        spec.cuts.push_back(cut);
    }

    // keep the flat boundary sequence weakly increasing
    double running = spec.bottom;
    for (auto& cut : spec.cuts) {
        cut.lo = std::max(cut.lo, running);
        running = cut.lo;
        cut.hi = std::max(cut.hi, running);
        running = cut.hi;
    }
    return spec;
}

BoundarySpec prune_boundaries(const BoundarySpec& spec, const std::vector<double>& values,
                              const std::vector<std::string>& decisions, double delta) {
    if (values.size() != decisions.size())
        fail(errc::dimension, "value and decision columns differ in length");
    if (!std::isfinite(delta) || delta < 0.0 || delta > 1.0)
        fail(errc::parameter, "the pruning threshold must lie in [0,1]");

    auto distribution = [&](double lo, double hi, bool include_lo) {
        std::map<std::string, double> dist;
        double total = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            bool in = include_lo ? (values[i] >= lo && values[i] <= hi)
                                 : (values[i] > lo && values[i] <= hi);
            if (in) {
                dist[decisions[i]] += 1.0;
                total += 1.0;
            }
        }
        if (total > 0) {
            for (auto& [label, weight] : dist) weight /= total;
        }
        return dist;
    };

    auto total_variation = [](const std::map<std::string, double>& p,
                              const std::map<std::string, double>& q) {
        if (p.empty() || q.empty()) return 0.0; // no evidence on one side
        std::set<std::string> labels;
        for (const auto& [l, w] : p) labels.insert(l);
        for (const auto& [l, w] : q) labels.insert(l);
        double tv = 0.0;
        for (const auto& l : labels) {
            double pw = p.count(l) ? p.at(l) : 0.0;
            double qw = q.count(l) ? q.at(l) : 0.0;
            tv += std::abs(pw - qw);
        }
        return tv / 2.0;
    };

    BoundarySpec pruned = spec;
    pruned.cuts.clear();
    for (std::size_t j = 0; j < spec.cuts.size(); ++j) {
        double centre = spec.cuts[j].q;
        double left_edge = j > 0 ? spec.cuts[j - 1].q : spec.bottom;
        double right_edge = j + 1 < spec.cuts.size() ? spec.cuts[j + 1].q : spec.top;
        auto left = distribution(left_edge, centre, j == 0);
        auto right = distribution(centre, right_edge, false);
        if (total_variation(left, right) >= delta) pruned.cuts.push_back(spec.cuts[j]);
    }
    return pruned;
}

// ---------------------------------------------------------------------------
// Rank-space intervals and repair
// ---------------------------------------------------------------------------

namespace {

std::vector<double> chain_doubles(const ColumnRank& ranks, const std::string& attribute) {
    std::vector<double> chain;
    chain.reserve(ranks.values.size());
    for (const auto& v : ranks.values) {
        if (!is_number(v))
            fail(errc::numeric, "attribute '" + attribute +
                                    "' holds categorical tokens; the quantile pipeline needs "
                                    "numeric columns");
        chain.push_back(std::get<double>(v));
    }
    return chain;
}

int first_rank_at_least(const std::vector<double>& chain, double v) {
    return static_cast<int>(std::lower_bound(chain.begin(), chain.end(), v) - chain.begin());
}

int last_rank_at_most(const std::vector<double>& chain, double v) {
    return static_cast<int>(std::upper_bound(chain.begin(), chain.end(), v) - chain.begin()) - 1;
}

std::string interval_text(const ChainInterval& iv) {
    return "[" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) + "]";
}

// Turns a raw interval list into a valid chain block system by dropping
// empty and contained intervals, widening endpoints leftmost-first to
// close gaps, and stretching the ends to the chain bounds.
std::vector<ChainInterval> repair_intervals(std::vector<ChainInterval> raw, int k,
                                            std::vector<std::string>* log) {
    auto note = [&](std::string message) {
        if (log) log->push_back(std::move(message));
    };

    std::vector<ChainInterval> kept;
    for (auto iv : raw) {
        iv.lo = std::max(iv.lo, 0);
        iv.hi = std::min(iv.hi, k - 1);
        if (iv.lo > iv.hi) {
            note("dropped empty interval");
            continue;
        }
        kept.push_back(iv);
    }
    if (kept.empty()) {
        note("all intervals empty; fell back to the total interval [0," + std::to_string(k - 1) +
             "]");
        return {ChainInterval{0, k - 1}};
    }

    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());

    // drop intervals contained in another (covers duplicates of the same lo)
    std::vector<ChainInterval> maximal;
    for (const auto& iv : kept) {
        bool contained = false;
        for (const auto& other : kept) {
            if (other == iv) continue;
            if (other.lo <= iv.lo && iv.hi <= other.hi) {
                contained = true;
                break;
            }
        }
        if (contained) {
            note("dropped interval " + interval_text(iv) + " contained in a larger one");
        } else {
            maximal.push_back(iv);
        }
    }

    if (maximal.front().lo != 0) {
        note("widened leading interval " + interval_text(maximal.front()) +
             " to start the chain");
        maximal.front().lo = 0;
    }
    for (std::size_t i = 0; i + 1 < maximal.size(); ++i) {
        if (maximal[i + 1].lo > maximal[i].hi + 1) {
            note("widened interval " + interval_text(maximal[i]) + " to close the gap before " +
                 interval_text(maximal[i + 1]));
            maximal[i].hi = maximal[i + 1].lo - 1;
        }
    }
    if (maximal.back().hi != k - 1) {
        note("widened trailing interval " + interval_text(maximal.back()) +
             " to finish the chain");
        maximal.back().hi = k - 1;
    }
    return maximal;
}

ChainBlockSystem make_system(int k, std::vector<ChainInterval> intervals) {
    ChainBlockSystem system;
    system.n = k;
    system.intervals = std::move(intervals);
    // Construction keeps these by design; a violation is a bug.
    for (std::size_t i = 0; i + 1 < system.intervals.size(); ++i) {
        const auto& a = system.intervals[i];
        const auto& b = system.intervals[i + 1];
        if (!(a.lo < b.lo && b.lo <= a.hi + 1 && a.hi < b.hi))
            fail(errc::internal, "interval repair produced an invalid chain block system");
    }
    if (system.intervals.front().lo != 0 || system.intervals.back().hi != k - 1)
        fail(errc::internal, "interval repair lost the chain ends");
    return system;
}

enum : int { kReadOverlap = 0, kReadSplitLow = 1, kReadSplitHigh = 2 };

// Raw rank intervals for one reading of the cut zones: per cut, either the
// zone is shared (overlap), or the chain splits sharply at the zone's low
// or high edge.
std::vector<ChainInterval> raw_intervals(const BoundarySpec& spec,
                                         const std::vector<double>& chain,
                                         const std::vector<int>& readings) {
    const int k = static_cast<int>(chain.size());
    const std::size_t f = spec.cuts.size();
    std::vector<ChainInterval> raw(f + 1);
    raw.front().lo = 0;
    raw.back().hi = k - 1;
    for (std::size_t j = 0; j < f; ++j) {
        int last_below = last_rank_at_most(chain, spec.cuts[j].hi);
        int first_above = first_rank_at_least(chain, spec.cuts[j].lo);
        switch (readings[j]) {
        case kReadOverlap:
            raw[j].hi = last_below;
            raw[j + 1].lo = first_above;
            break;
        case kReadSplitLow:
            raw[j].hi = first_above - 1;
            raw[j + 1].lo = first_above;
            break;
        case kReadSplitHigh:
            raw[j].hi = last_below;
            raw[j + 1].lo = last_below + 1;
            break;
        default: fail(errc::internal, "unknown cut reading");
        }
    }
    return raw;
}

} // namespace

ChainBlockSystem intervals_to_chain_blocks(const BoundarySpec& spec, const ColumnRank& ranks,
                                           std::vector<std::string>* repair_log) {
    std::vector<double> chain = chain_doubles(ranks, spec.attribute);
    const int k = static_cast<int>(chain.size());
    if (static_cast<std::size_t>(k) < spec.cuts.size() + 1)
        fail(errc::discretization, "column '" + spec.attribute + "' has " + std::to_string(k) +
                                       " distinct values but the boundaries call for " +
                                       std::to_string(spec.cuts.size() + 1) + " intervals");
    std::vector<int> readings(spec.cuts.size(), kReadOverlap);
    auto repaired = repair_intervals(raw_intervals(spec, chain, readings), k, repair_log);
    return make_system(k, std::move(repaired));
}

AlignmentCandidates alignment_candidates(const BoundarySpec& spec, const ColumnRank& ranks) {
    std::vector<double> chain = chain_doubles(ranks, spec.attribute);
    const int k = static_cast<int>(chain.size());
    if (static_cast<std::size_t>(k) < spec.cuts.size() + 1)
        fail(errc::discretization, "column '" + spec.attribute + "' has " + std::to_string(k) +
                                       " distinct values but the boundaries call for " +
                                       std::to_string(spec.cuts.size() + 1) + " intervals");
    const std::size_t f = spec.cuts.size();
    if (f > 8)
        fail(errc::capacity, "column '" + spec.attribute + "' has " + std::to_string(f) +
                                 " cuts; alignment enumeration supports at most 8 — raise the "
                                 "pruning threshold");

    std::size_t variants = 1;
    for (std::size_t j = 0; j < f; ++j) variants *= 3;

    std::map<std::vector<ChainInterval>, std::vector<std::string>> seen;
    std::vector<ChainInterval> default_intervals;
    for (std::size_t code = 0; code < variants; ++code) {
        std::vector<int> readings(f, kReadOverlap);
        std::size_t rest = code;
        for (std::size_t j = 0; j < f; ++j) {
            readings[j] = static_cast<int>(rest % 3);
            rest /= 3;
        }
        std::vector<std::string> log;
        auto repaired = repair_intervals(raw_intervals(spec, chain, readings), k, &log);
        if (code == 0) default_intervals = repaired;
        seen.emplace(std::move(repaired), std::move(log)); // first reading wins
    }

    AlignmentCandidates out;
    for (auto& [intervals, log] : seen) {
        if (intervals == default_intervals)
            out.default_index = static_cast<int>(out.systems.size());
        out.systems.push_back(make_system(k, intervals));
        out.repairs.push_back(log);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ranked tables and reasoners
// ---------------------------------------------------------------------------

RankedTable rank_table(const InformationTable& table) {
    std::vector<int> conditional = table.conditional_attributes();
    if (conditional.empty())
        fail(errc::parameter, "the pipeline needs at least one conditional attribute");

    RankedTable ranked;
    ranked.objects = table.objects;
    for (int a : conditional) {
        const std::string& name = table.attributes[static_cast<std::size_t>(a)];
        ranked.attributes.push_back(name);
        ranked.columns.push_back(column_rank(table, name));
        std::vector<double> numeric;
        numeric.reserve(table.objects.size());
        for (int o = 0; o < table.object_count(); ++o) {
            const Value& v = table.single(a, o);
            if (!is_number(v))
                fail(errc::numeric, "attribute '" + name +
                                        "' holds categorical tokens; the quantile pipeline "
                                        "needs numeric columns");
            numeric.push_back(std::get<double>(v));
        }
        ranked.numeric.push_back(std::move(numeric));
    }
    return ranked;
}

bool LargeMindedReasoner::in_domain(const std::vector<int>& tuple) const {
    if (tuple.size() != candidates.size()) return false;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (tuple[i] < 0 || tuple[i] >= static_cast<int>(candidates[i].size())) return false;
        if (allow[i] &&
            !std::binary_search(allow[i]->begin(), allow[i]->end(), tuple[i]))
            return false;
    }
    if (extra_filter && !extra_filter(tuple)) return false;
    return true;
}

namespace {

constexpr std::size_t kCellCap = 1'000'000;

using BitWords = std::vector<std::uint64_t>;

BitWords make_words(std::size_t bits) { return BitWords((bits + 63) / 64, 0); }

void set_bit(BitWords& w, std::size_t i) { w[i / 64] |= std::uint64_t{1} << (i % 64); }

bool any_bit(const BitWords& w) {
    return std::any_of(w.begin(), w.end(), [](std::uint64_t x) { return x != 0; });
}

bool subset_of(const BitWords& a, const BitWords& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] & ~b[i]) return false;
    }
    return true;
}

std::vector<int> words_to_indices(const BitWords& w) {
    std::vector<int> out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        std::uint64_t word = w[i];
        while (word) {
            int bit = std::countr_zero(word);
            out.push_back(static_cast<int>(i * 64 + static_cast<std::size_t>(bit)));
            word &= word - 1;
        }
    }
    return out;
}

// canonical block order: least member, then size, then lexicographic
bool block_before(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.front() != b.front()) return a.front() < b.front();
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

} // namespace

CombinedBlocks lmr_apply(const LargeMindedReasoner& psi, const std::vector<int>& tuple,
                         const RankedTable& ranked) {
    const std::size_t n_attrs = psi.candidates.size();
    if (psi.attributes.size() != n_attrs || psi.allow.size() != n_attrs)
        fail(errc::internal, "reasoner structure out of alignment");
    if (tuple.size() != n_attrs)
        fail(errc::dimension, "candidate tuple has " + std::to_string(tuple.size()) +
                                  " components for " + std::to_string(n_attrs) + " attributes");
    if (ranked.attributes != psi.attributes)
        fail(errc::internal, "ranked table and reasoner disagree on attributes");
    for (std::size_t i = 0; i < n_attrs; ++i) {
        if (tuple[i] < 0 || tuple[i] >= static_cast<int>(psi.candidates[i].size()))
            fail(errc::parameter, "candidate index " + std::to_string(tuple[i]) +
                                      " out of range for attribute '" + psi.attributes[i] + "'");
    }
    if (!psi.in_domain(tuple))
        fail(errc::domain, "candidate tuple outside the reasoner's domain");

    const std::size_t n_objects = ranked.objects.size();
    std::size_t cells = 1;
    for (std::size_t i = 0; i < n_attrs; ++i) {
        const ChainBlockSystem& system = psi.candidates[i][static_cast<std::size_t>(tuple[i])];
        if (system.n != ranked.columns[i].chain_size())
            fail(errc::internal, "rank misalignment: candidate for attribute '" +
                                     psi.attributes[i] + "' lives on a chain of " +
                                     std::to_string(system.n) + " but the column has " +
                                     std::to_string(ranked.columns[i].chain_size()) +
                                     " distinct values");
        if (cells > kCellCap / std::max<std::size_t>(system.intervals.size(), 1))
            fail(errc::capacity, "product of per-attribute interval counts exceeds " +
                                     std::to_string(kCellCap));
        cells *= system.intervals.size();
    }

    // per attribute, per interval: which objects' ranks fall inside
    std::vector<std::vector<BitWords>> membership(n_attrs);
    for (std::size_t i = 0; i < n_attrs; ++i) {
        const ChainBlockSystem& system = psi.candidates[i][static_cast<std::size_t>(tuple[i])];
        membership[i].reserve(system.intervals.size());
        for (const auto& iv : system.intervals) {
            BitWords w = make_words(n_objects);
            for (std::size_t o = 0; o < n_objects; ++o) {
                if (iv.contains(ranked.columns[i].rank[o])) set_bit(w, o);
            }
            membership[i].push_back(std::move(w));
        }
    }

    // sweep the product cells, grouping factor tuples by object set
    std::map<BitWords, std::vector<std::vector<int>>> by_members;
    std::vector<int> cell(n_attrs, 0);
    for (std::size_t step = 0; step < cells; ++step) {
        BitWords members = membership[0][static_cast<std::size_t>(cell[0])];
        for (std::size_t i = 1; i < n_attrs; ++i) {
            const BitWords& m = membership[i][static_cast<std::size_t>(cell[i])];
            for (std::size_t w = 0; w < members.size(); ++w) members[w] &= m[w];
        }
        if (any_bit(members)) by_members[members].push_back(cell);
        // odometer over interval indices, last attribute fastest
        for (std::size_t i = n_attrs; i-- > 0;) {
            int limit = static_cast<int>(
                psi.candidates[i][static_cast<std::size_t>(tuple[i])].intervals.size());
            if (++cell[i] < limit) break;
            cell[i] = 0;
        }
    }

    // keep the maximal object sets only; those are the blocks
    std::vector<const BitWords*> keys;
    keys.reserve(by_members.size());
    for (const auto& [members, factors] : by_members) keys.push_back(&members);

    struct Entry {
        std::vector<int> members;
        std::vector<std::vector<int>> factors;
    };
    std::vector<Entry> entries;
    for (const auto& [members, factors] : by_members) {
        bool maximal = true;
        for (const BitWords* other : keys) {
            if (other != &members && subset_of(members, *other)) {
                maximal = false;
                break;
            }
        }
        if (!maximal) continue;
        Entry e;
        e.members = words_to_indices(members);
        e.factors = factors;
        std::sort(e.factors.begin(), e.factors.end());
        e.factors.erase(std::unique(e.factors.begin(), e.factors.end()), e.factors.end());
        entries.push_back(std::move(e));
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return block_before(a.members, b.members); });

    CombinedBlocks out;
    out.blocks.universe_size = static_cast<int>(n_objects);
    for (auto& e : entries) {
        out.blocks.blocks.push_back(std::move(e.members));
        out.factors.push_back(std::move(e.factors));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pipelines
// ---------------------------------------------------------------------------

namespace {

struct DecisionInfo {
    std::string attribute;
    std::vector<std::string> labels;
    std::vector<int> class_of;
};

DecisionInfo decision_info(const InformationTable& table) {
    if (!table.has_decision())
        fail(errc::parameter, "the pipeline needs a designated decision attribute");
    DecisionInfo info;
    info.attribute = table.decision_attribute;
    int d = table.attribute_index(table.decision_attribute);

    std::vector<Value> values;
    values.reserve(table.objects.size());
    for (int o = 0; o < table.object_count(); ++o) values.push_back(table.single(d, o));

    std::vector<Value> distinct = values;
    std::sort(distinct.begin(), distinct.end(), value_less_canonical);
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    for (const auto& v : distinct) info.labels.push_back(format_value(v));
    info.class_of.reserve(values.size());
    for (const auto& v : values) {
        auto it = std::lower_bound(distinct.begin(), distinct.end(), v, value_less_canonical);
        info.class_of.push_back(static_cast<int>(it - distinct.begin()));
    }
    return info;
}

QuantileParams params_for(const AgrssaOptions& options, const std::string& attribute) {
    auto it = options.per_attribute.find(attribute);
    return it == options.per_attribute.end() ? options.defaults : it->second;
}

void check_known_attributes(const std::map<std::string, std::vector<int>>& m,
                            const std::vector<std::string>& attributes, const char* what) {
    for (const auto& [name, indices] : m) {
        if (std::find(attributes.begin(), attributes.end(), name) == attributes.end())
            fail(errc::parameter, std::string(what) + " names unknown conditional attribute '" +
                                      name + "'");
    }
}

std::vector<std::string> decision_labels_per_object(const DecisionInfo& info) {
    std::vector<std::string> labels;
    labels.reserve(info.class_of.size());
    for (int c : info.class_of) labels.push_back(info.labels[static_cast<std::size_t>(c)]);
    return labels;
}

ToleranceModel assemble_model(const InformationTable& table, const ReasonerBundle& bundle,
                              const std::vector<std::vector<std::vector<std::string>>>& repairs,
                              const std::vector<int>& tuple, const std::string& instance_kind) {
    CombinedBlocks combined = lmr_apply(bundle.psi, tuple, bundle.ranked);
    DecisionInfo decisions = decision_info(table);

    ToleranceModel model;
    model.objects = table.objects;
    for (std::size_t i = 0; i < bundle.psi.attributes.size(); ++i) {
        AttributeModel am;
        am.attribute = bundle.psi.attributes[i];
        am.chain_values = bundle.ranked.columns[i].values;
        am.boundaries = bundle.boundaries[i];
        am.system = bundle.psi.candidates[i][static_cast<std::size_t>(tuple[i])];
        am.repairs = repairs[i][static_cast<std::size_t>(tuple[i])];
        am.chosen_index = tuple[i];
        am.candidate_count = static_cast<int>(bundle.psi.candidates[i].size());
        model.attributes.push_back(std::move(am));
    }
    model.table_blocks = std::move(combined.blocks);
    model.block_factors = std::move(combined.factors);
    model.decision_attribute = decisions.attribute;
    model.class_labels = decisions.labels;
    model.class_of_object = decisions.class_of;
    model.decision_quality = decision_gamma(model.table_blocks, model.class_of_object);
    model.instance_kind = instance_kind;
    model.instance_tuple = tuple;
    return model;
}

// Reasoner plus the per-candidate repair logs build_reasoner accumulates.
struct BuiltReasoner {
    ReasonerBundle bundle;
    std::vector<std::vector<std::vector<std::string>>> repairs; // [attr][candidate]
    std::vector<int> default_indices;
};

BuiltReasoner build_reasoner_full(const InformationTable& table, const AgrssaOptions& options,
                                  const PsiConfig& psi) {
    BuiltReasoner built;
    ReasonerBundle& bundle = built.bundle;
    bundle.ranked = rank_table(table);
    const auto& attributes = bundle.ranked.attributes;

    for (const auto& [name, params] : options.per_attribute) {
        if (std::find(attributes.begin(), attributes.end(), name) == attributes.end())
            fail(errc::parameter,
                 "quantile parameters name unknown conditional attribute '" + name + "'");
    }
    check_known_attributes(psi.candidate_indices, attributes, "candidate restriction");
    check_known_attributes(psi.allow, attributes, "domain allowlist");

    DecisionInfo decisions;
    std::vector<std::string> labels;
    if (psi.source == PsiConfig::Source::alignment) {
        decisions = decision_info(table);
        labels = decision_labels_per_object(decisions);
    }

    bundle.psi.attributes = attributes;
    for (std::size_t i = 0; i < attributes.size(); ++i) {
        std::vector<ChainBlockSystem> candidates;
        std::vector<std::vector<std::string>> repair_logs;
        int default_index = 0;

        if (psi.source == PsiConfig::Source::ubd) {
            const int k = bundle.ranked.columns[i].chain_size();
            UniversalBlockDistribution ubd = enumerate_chain_tolerances(k);
            candidates = std::move(ubd.systems);
            repair_logs.assign(candidates.size(), {});
            bundle.boundaries.push_back(std::nullopt);
        } else {
            QuantileParams params = params_for(options, attributes[i]);
            BoundarySpec spec = quantile_boundaries(attributes[i], bundle.ranked.numeric[i],
                                                    params.q, params.e_mode, params.e_fraction);
            spec = prune_boundaries(spec, bundle.ranked.numeric[i], labels, options.delta);
            AlignmentCandidates aligned = alignment_candidates(spec, bundle.ranked.columns[i]);
            candidates = std::move(aligned.systems);
            repair_logs = std::move(aligned.repairs);
            default_index = aligned.default_index;
            bundle.boundaries.push_back(std::move(spec));
        }

        auto restriction = psi.candidate_indices.find(attributes[i]);
        if (restriction != psi.candidate_indices.end()) {
            std::vector<int> indices = restriction->second;
            std::sort(indices.begin(), indices.end());
            indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
            std::vector<ChainBlockSystem> chosen;
            std::vector<std::vector<std::string>> chosen_logs;
            int new_default = 0;
            for (int idx : indices) {
                if (idx < 0 || idx >= static_cast<int>(candidates.size()))
                    fail(errc::parameter, "candidate index " + std::to_string(idx) +
                                              " out of range for attribute '" + attributes[i] +
                                              "' (" + std::to_string(candidates.size()) +
                                              " candidates)");
                if (idx == default_index) new_default = static_cast<int>(chosen.size());
                chosen.push_back(candidates[static_cast<std::size_t>(idx)]);
                chosen_logs.push_back(repair_logs[static_cast<std::size_t>(idx)]);
            }
            candidates = std::move(chosen);
            repair_logs = std::move(chosen_logs);
            default_index = new_default;
        }
        if (candidates.empty())
            fail(errc::parameter,
                 "attribute '" + attributes[i] + "' was left with no candidates");

        auto allowed = psi.allow.find(attributes[i]);
        if (allowed != psi.allow.end()) {
            std::vector<int> positions = allowed->second;
            std::sort(positions.begin(), positions.end());
            positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
            for (int p : positions) {
                if (p < 0 || p >= static_cast<int>(candidates.size()))
                    fail(errc::parameter, "allowlist position " + std::to_string(p) +
                                              " out of range for attribute '" + attributes[i] +
                                              "' (" + std::to_string(candidates.size()) +
                                              " candidates)");
            }
            bundle.psi.allow.push_back(std::move(positions));
        } else {
            bundle.psi.allow.push_back(std::nullopt);
        }

        bundle.psi.candidates.push_back(std::move(candidates));
        built.repairs.push_back(std::move(repair_logs));
        built.default_indices.push_back(default_index);
    }
    return built;
}

} // namespace

ReasonerBundle build_reasoner(const InformationTable& table, const AgrssaOptions& options,
                              const PsiConfig& psi) {
    return build_reasoner_full(table, options, psi).bundle;
}

ToleranceModel agrssa_m(const InformationTable& table, const AgrssaOptions& options,
                        const std::vector<int>& sigma) {
    PsiConfig alignment;
    alignment.source = PsiConfig::Source::alignment;
    BuiltReasoner built = build_reasoner_full(table, options, alignment);

    const std::size_t n_attrs = built.bundle.psi.attributes.size();
    std::vector<int> tuple;
    if (sigma.empty()) {
        tuple = built.default_indices;
    } else {
        if (sigma.size() != n_attrs)
            fail(errc::parameter, "sigma has " + std::to_string(sigma.size()) +
                                      " components for " + std::to_string(n_attrs) +
                                      " conditional attributes");
        for (std::size_t i = 0; i < n_attrs; ++i) {
            int count = static_cast<int>(built.bundle.psi.candidates[i].size());
            if (sigma[i] < 0 || sigma[i] >= count)
                fail(errc::parameter, "sigma index " + std::to_string(sigma[i]) +
                                          " out of range for attribute '" +
                                          built.bundle.psi.attributes[i] + "' (" +
                                          std::to_string(count) + " candidates)");
        }
        tuple = sigma;
    }
    return assemble_model(table, built.bundle, built.repairs, tuple, "sigma");
}

LmrResult agrssa_lmr(const InformationTable& table, const AgrssaOptions& options,
                     const PsiConfig& psi, const SelectionRule& selection) {
    if (selection.kind == SelectionRule::Kind::top_k && selection.k < 1)
        fail(errc::parameter, "top-k selection needs k >= 1");
    if (selection.kind == SelectionRule::Kind::threshold &&
        (!std::isfinite(selection.theta) || selection.theta < 0.0 || selection.theta > 1.0))
        fail(errc::parameter, "threshold selection needs theta in [0,1]");

    BuiltReasoner built = build_reasoner_full(table, options, psi);
    const LargeMindedReasoner& reasoner = built.bundle.psi;
    const std::size_t n_attrs = reasoner.attributes.size();

    // allowlist-admissible positions per attribute
    std::vector<std::vector<int>> admissible(n_attrs);
    for (std::size_t i = 0; i < n_attrs; ++i) {
        if (reasoner.allow[i]) {
            admissible[i] = *reasoner.allow[i];
        } else {
            admissible[i].resize(reasoner.candidates[i].size());
            for (std::size_t p = 0; p < reasoner.candidates[i].size(); ++p)
                admissible[i][p] = static_cast<int>(p);
        }
    }

    std::size_t total = 1;
    bool overflow = false;
    std::string sizes_text;
    for (std::size_t i = 0; i < n_attrs; ++i) {
        if (!sizes_text.empty()) sizes_text += ", ";
        sizes_text += reasoner.attributes[i] + "=" + std::to_string(admissible[i].size());
        if (admissible[i].empty()) {
            total = 0;
            continue;
        }
        if (total > options.cap / admissible[i].size() + 1) overflow = true;
        total *= admissible[i].size();
    }
    if (overflow || total > options.cap)
        fail(errc::capacity, "candidate tuples exceed the cap of " + std::to_string(options.cap) +
                                 "; per-attribute candidate counts: " + sizes_text);

    LmrResult result;
    result.selection = selection;

    struct Scored {
        double quality;
        std::vector<int> tuple;
    };
    std::vector<Scored> scored;

    DecisionInfo decisions = decision_info(table);
    if (total > 0) {
        std::vector<std::size_t> pos(n_attrs, 0);
        for (std::size_t step = 0; step < total; ++step) {
            std::vector<int> tuple(n_attrs);
            for (std::size_t i = 0; i < n_attrs; ++i) tuple[i] = admissible[i][pos[i]];
            ++result.instances_considered;
            if (reasoner.in_domain(tuple)) {
                CombinedBlocks combined = lmr_apply(reasoner, tuple, built.bundle.ranked);
                double quality = decision_gamma(combined.blocks, decisions.class_of);
                scored.push_back(Scored{quality, std::move(tuple)});
            }
            for (std::size_t i = n_attrs; i-- > 0;) {
                if (++pos[i] < admissible[i].size()) break;
                pos[i] = 0;
            }
        }
    }
    result.instances_evaluated = scored.size();

    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.quality != b.quality) return a.quality > b.quality;
        return a.tuple < b.tuple;
    });

    std::vector<const Scored*> selected;
    if (!scored.empty()) {
        switch (selection.kind) {
        case SelectionRule::Kind::max_quality: {
            double best = scored.front().quality;
            for (const auto& s : scored) {
                if (s.quality == best) selected.push_back(&s);
            }
            break;
        }
        case SelectionRule::Kind::top_k: {
            for (std::size_t i = 0; i < scored.size() && i < static_cast<std::size_t>(selection.k);
                 ++i)
                selected.push_back(&scored[i]);
            break;
        }
        case SelectionRule::Kind::threshold: {
            for (const auto& s : scored) {
                if (s.quality >= selection.theta) selected.push_back(&s);
            }
            break;
        }
        }
    }

    for (const Scored* s : selected)
        result.models.push_back(
            assemble_model(table, built.bundle, built.repairs, s->tuple, "psi"));

    if (result.models.empty()) {
        if (result.instances_considered == 0) {
            result.notice = "no candidate tuples to consider";
        } else if (result.instances_evaluated == 0) {
            result.notice = "the domain filter rejected every candidate tuple";
        } else {
            result.notice = "no evaluated instance met the selection rule";
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Explanations
// ---------------------------------------------------------------------------

namespace {

FactorizedBlock factorize_block(const ToleranceModel& model, int block_index) {
    FactorizedBlock fb;
    fb.block_index = block_index;
    fb.members = model.table_blocks.blocks[static_cast<std::size_t>(block_index)];
    for (const auto& factor : model.block_factors[static_cast<std::size_t>(block_index)]) {
        std::vector<ChainInterval> intervals;
        intervals.reserve(factor.size());
        for (std::size_t i = 0; i < factor.size(); ++i) {
            const auto& system = model.attributes[i].system;
            intervals.push_back(system.intervals[static_cast<std::size_t>(factor[i])]);
        }
        fb.factorizations.push_back(std::move(intervals));
    }
    return fb;
}

} // namespace

Explanation explain(const ToleranceModel& model, const std::vector<int>& x) {
    GranularApproximation g = approximate(model.table_blocks, x);
    Explanation e;
    e.query = g.query;
    e.lower = g.lower;
    e.upper = g.upper;
    for (int b : g.lower_blocks) e.lower_blocks.push_back(factorize_block(model, b));
    for (int b : g.upper_blocks) e.upper_blocks.push_back(factorize_block(model, b));
    return e;
}

namespace {

std::string object_set_text(const std::vector<int>& indices,
                            const std::vector<std::string>& names) {
    std::string out = "{";
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i > 0) out += ", ";
        out += names[static_cast<std::size_t>(indices[i])];
    }
    return out + "}";
}

std::string interval_value_text(const ChainInterval& iv, const AttributeModel& am) {
    std::string lo = format_value(am.chain_values[static_cast<std::size_t>(iv.lo)]);
    std::string hi = format_value(am.chain_values[static_cast<std::size_t>(iv.hi)]);
    return am.attribute + " in [" + lo + ", " + hi + "] (ranks " + std::to_string(iv.lo) + ".." +
           std::to_string(iv.hi) + ")";
}

void render_side(std::string& out, const char* label, const std::vector<int>& members,
                 const std::vector<FactorizedBlock>& blocks, const ToleranceModel& model) {
    out += label;
    out += " = " + object_set_text(members, model.objects) + "\n";
    for (const auto& fb : blocks) {
        out += "  block " + std::to_string(fb.block_index) + " " +
               object_set_text(fb.members, model.objects) + "\n";
        for (const auto& factors : fb.factorizations) {
            out += "    via";
            for (std::size_t i = 0; i < factors.size(); ++i) {
                out += (i == 0 ? " " : ", ");
                out += interval_value_text(factors[i], model.attributes[i]);
            }
            out += "\n";
        }
    }
}

} // namespace

std::string render_text(const Explanation& e, const ToleranceModel& model) {
    std::string out;
    out += "query " + object_set_text(e.query, model.objects) + "\n";
    render_side(out, "lower", e.lower, e.lower_blocks, model);
    render_side(out, "upper", e.upper, e.upper_blocks, model);
    return out;
}

void register_psi_star(RrfRegistry& registry, const ToleranceModel& model) {
    registry.add(
        RrfDescriptor{"psi-star", RrfType::type_h, "operator tag ('l' or 'u') with an object set",
                      "block decomposition with chain-interval factors", true},
        [model](const RrfInput& input) -> RrfValue {
            if (input.approx_op != 'l' && input.approx_op != 'u')
                fail(errc::domain, "the operator tag must be 'l' (lower) or 'u' (upper)");
            Explanation e = explain(model, input.a);
            nlohmann::json j;
            j["operator"] = input.approx_op == 'l' ? "lower" : "upper";
            j["set"] = input.approx_op == 'l' ? e.lower : e.upper;
            j["blocks"] = input.approx_op == 'l' ? e.lower_blocks : e.upper_blocks;
            return j;
        });
}

// ---------------------------------------------------------------------------
// Config and JSON
// ---------------------------------------------------------------------------

const char* e_mode_name(EMode mode) {
    switch (mode) {
    case EMode::global_std_fraction: return "global-std-fraction";
    case EMode::local_std_fraction: return "local-std-fraction";
    case EMode::fixed: return "fixed";
    }
    return "?";
}

EMode parse_e_mode(const std::string& name) {
    if (name == "global-std-fraction") return EMode::global_std_fraction;
    if (name == "local-std-fraction") return EMode::local_std_fraction;
    if (name == "fixed") return EMode::fixed;
    fail(errc::schema, "unknown e_mode '" + name + "'");
}

namespace {

QuantileParams quantile_params_from_json(const nlohmann::json& j) {
    if (!j.is_object()) fail(errc::schema, "quantile parameters must be a JSON object");
    QuantileParams p;
    if (j.contains("q")) {
        if (!j["q"].is_number_integer()) fail(errc::schema, "q must be an integer");
        p.q = j["q"].get<int>();
    }
    if (j.contains("e_mode")) p.e_mode = parse_e_mode(j["e_mode"].get<std::string>());
    if (j.contains("e_fraction")) {
        if (!j["e_fraction"].is_number()) fail(errc::schema, "e_fraction must be a number");
        p.e_fraction = j["e_fraction"].get<double>();
    }
    return p;
}

} // namespace

AgrssaOptions agrssa_options_from_json(const nlohmann::json& j) {
    if (!j.is_object()) fail(errc::schema, "the pipeline config must be a JSON object");
    AgrssaOptions options;
    if (j.contains("default")) options.defaults = quantile_params_from_json(j["default"]);
    if (j.contains("attributes")) {
        if (!j["attributes"].is_object())
            fail(errc::schema, "attributes must map attribute names to quantile parameters");
        for (const auto& [name, params] : j["attributes"].items())
            options.per_attribute[name] = quantile_params_from_json(params);
    }
    if (j.contains("delta")) {
        if (!j["delta"].is_number()) fail(errc::schema, "delta must be a number");
        options.delta = j["delta"].get<double>();
    }
    if (j.contains("cap")) {
        if (!j["cap"].is_number_integer() || j["cap"].get<long long>() < 1)
            fail(errc::schema, "cap must be a positive integer");
        options.cap = j["cap"].get<std::size_t>();
    }
    return options;
}

std::vector<int> sigma_from_json(const nlohmann::json& j) {
    if (!j.contains("sigma")) return {};
    if (!j["sigma"].is_array()) fail(errc::schema, "sigma must be an array of candidate indices");
    std::vector<int> sigma;
    for (const auto& v : j["sigma"]) {
        if (!v.is_number_integer()) fail(errc::schema, "sigma entries must be integers");
        sigma.push_back(v.get<int>());
    }
    return sigma;
}

PsiConfig psi_config_from_json(const nlohmann::json& j) {
    PsiConfig psi;
    if (!j.contains("psi")) return psi;
    const nlohmann::json& p = j["psi"];
    if (!p.is_object()) fail(errc::schema, "psi must be a JSON object");
    if (p.contains("source")) {
        std::string source = p["source"].get<std::string>();
        if (source == "ubd") {
            psi.source = PsiConfig::Source::ubd;
        } else if (source == "alignment") {
            psi.source = PsiConfig::Source::alignment;
        } else {
            fail(errc::schema, "psi source must be \"ubd\" or \"alignment\"");
        }
    }
    auto read_index_map = [](const nlohmann::json& m, const char* what) {
        std::map<std::string, std::vector<int>> out;
        if (!m.is_object())
            fail(errc::schema, std::string(what) + " must map attribute names to index lists");
        for (const auto& [name, list] : m.items()) {
            if (!list.is_array())
                fail(errc::schema, std::string(what) + " entry for '" + name +
                                       "' must be an index array");
            std::vector<int> indices;
            for (const auto& v : list) {
                if (!v.is_number_integer())
                    fail(errc::schema, std::string(what) + " indices must be integers");
                indices.push_back(v.get<int>());
            }
            out[name] = std::move(indices);
        }
        return out;
    };
    if (p.contains("candidates")) psi.candidate_indices = read_index_map(p["candidates"], "candidates");
    if (p.contains("allow")) psi.allow = read_index_map(p["allow"], "allow");
    return psi;
}

SelectionRule selection_from_json(const nlohmann::json& j) {
    SelectionRule rule;
    if (!j.contains("selection")) return rule;
    const nlohmann::json& s = j["selection"];
    std::string name;
    if (s.is_string()) {
        name = s.get<std::string>();
    } else if (s.is_object() && s.contains("rule")) {
        name = s["rule"].get<std::string>();
    } else {
        fail(errc::schema, "selection must be a rule name or {\"rule\": ...}");
    }
    if (name == "max-quality") {
        rule.kind = SelectionRule::Kind::max_quality;
    } else if (name == "top-k") {
        rule.kind = SelectionRule::Kind::top_k;
        if (!s.is_object() || !s.contains("k") || !s["k"].is_number_integer())
            fail(errc::schema, "top-k selection needs an integer k");
        rule.k = s["k"].get<int>();
    } else if (name == "threshold") {
        rule.kind = SelectionRule::Kind::threshold;
        if (!s.is_object() || !s.contains("theta") || !s["theta"].is_number())
            fail(errc::schema, "threshold selection needs a numeric theta");
        rule.theta = s["theta"].get<double>();
    } else {
        fail(errc::schema, "unknown selection rule '" + name + "'");
    }
    return rule;
}

void to_json(nlohmann::json& j, const BoundaryCut& cut) {
    j = nlohmann::json{{"q", cut.q}, {"e", cut.e}, {"lo", cut.lo}, {"hi", cut.hi}};
}

void from_json(const nlohmann::json& j, BoundaryCut& cut) {
    cut.q = j.at("q").get<double>();
    cut.e = j.at("e").get<double>();
    cut.lo = j.at("lo").get<double>();
    cut.hi = j.at("hi").get<double>();
}

void to_json(nlohmann::json& j, const BoundarySpec& spec) {
    j = nlohmann::json{{"attribute", spec.attribute},
                       {"q", spec.q},
                       {"e_mode", e_mode_name(spec.e_mode)},
                       {"e_fraction", spec.e_fraction},
                       {"bottom", spec.bottom},
                       {"top", spec.top},
                       {"cuts", spec.cuts},
                       {"boundaries", spec.boundaries()}};
}

void from_json(const nlohmann::json& j, BoundarySpec& spec) {
    spec = BoundarySpec{};
    spec.attribute = j.at("attribute").get<std::string>();
    spec.q = j.at("q").get<int>();
    spec.e_mode = parse_e_mode(j.at("e_mode").get<std::string>());
    spec.e_fraction = j.at("e_fraction").get<double>();
    spec.bottom = j.at("bottom").get<double>();
    spec.top = j.at("top").get<double>();
    spec.cuts = j.at("cuts").get<std::vector<BoundaryCut>>();
}

void to_json(nlohmann::json& j, const AttributeModel& am) {
    j = nlohmann::json{{"attribute", am.attribute},
                       {"chain_values", am.chain_values},
                       {"system", am.system},
                       {"repairs", am.repairs},
                       {"chosen_index", am.chosen_index},
                       {"candidate_count", am.candidate_count}};
    if (am.boundaries) {
        j["boundaries"] = *am.boundaries;
    } else {
        j["boundaries"] = nullptr;
    }
}

void from_json(const nlohmann::json& j, AttributeModel& am) {
    am = AttributeModel{};
    am.attribute = j.at("attribute").get<std::string>();
    am.chain_values = j.at("chain_values").get<std::vector<Value>>();
    am.system = j.at("system").get<ChainBlockSystem>();
    if (j.contains("repairs")) am.repairs = j["repairs"].get<std::vector<std::string>>();
    if (j.contains("chosen_index")) am.chosen_index = j["chosen_index"].get<int>();
    if (j.contains("candidate_count")) am.candidate_count = j["candidate_count"].get<int>();
    if (j.contains("boundaries") && !j["boundaries"].is_null())
        am.boundaries = j["boundaries"].get<BoundarySpec>();
}

void to_json(nlohmann::json& j, const ToleranceModel& model) {
    j = nlohmann::json{{"objects", model.objects},
                       {"attributes", model.attributes},
                       {"table_blocks", model.table_blocks},
                       {"block_factors", model.block_factors},
                       {"decision_attribute", model.decision_attribute},
                       {"class_labels", model.class_labels},
                       {"class_of_object", model.class_of_object},
                       {"decision_quality", model.decision_quality},
                       {"instance", nlohmann::json{{"kind", model.instance_kind},
                                                   {"tuple", model.instance_tuple}}}};
}

void from_json(const nlohmann::json& j, ToleranceModel& model) {
    model = ToleranceModel{};
    model.objects = j.at("objects").get<std::vector<std::string>>();
    model.attributes = j.at("attributes").get<std::vector<AttributeModel>>();
    model.table_blocks = j.at("table_blocks").get<BlockSystem>();
    model.block_factors =
        j.at("block_factors").get<std::vector<std::vector<std::vector<int>>>>();
    model.decision_attribute = j.at("decision_attribute").get<std::string>();
    model.class_labels = j.at("class_labels").get<std::vector<std::string>>();
    model.class_of_object = j.at("class_of_object").get<std::vector<int>>();
    model.decision_quality = j.at("decision_quality").get<double>();
    if (j.contains("instance")) {
        model.instance_kind = j["instance"].value("kind", "sigma");
        if (j["instance"].contains("tuple"))
            model.instance_tuple = j["instance"]["tuple"].get<std::vector<int>>();
    }
    if (model.block_factors.size() != model.table_blocks.blocks.size())
        fail(errc::schema, "block_factors must align with table_blocks");
    if (model.class_of_object.size() != model.objects.size())
        fail(errc::schema, "class_of_object must align with objects");
}

void to_json(nlohmann::json& j, const SelectionRule& rule) {
    switch (rule.kind) {
    case SelectionRule::Kind::max_quality: j = nlohmann::json{{"rule", "max-quality"}}; break;
    case SelectionRule::Kind::top_k:
        j = nlohmann::json{{"rule", "top-k"}, {"k", rule.k}};
        break;
    case SelectionRule::Kind::threshold:
        j = nlohmann::json{{"rule", "threshold"}, {"theta", rule.theta}};
        break;
    }
}

void to_json(nlohmann::json& j, const FactorizedBlock& fb) {
    nlohmann::json factorizations = nlohmann::json::array();
    for (const auto& factors : fb.factorizations) {
        nlohmann::json one = nlohmann::json::array();
        for (const auto& iv : factors) one.push_back({iv.lo, iv.hi});
        factorizations.push_back(std::move(one));
    }
    j = nlohmann::json{{"block_index", fb.block_index},
                       {"members", fb.members},
                       {"factorizations", std::move(factorizations)}};
}

void to_json(nlohmann::json& j, const Explanation& e) {
    j = nlohmann::json{{"query", e.query},
                       {"lower", e.lower},
                       {"upper", e.upper},
                       {"lower_blocks", e.lower_blocks},
                       {"upper_blocks", e.upper_blocks}};
}

void to_json(nlohmann::json& j, const LmrResult& result) {
    j = nlohmann::json{{"models", result.models},
                       {"instances_evaluated", result.instances_evaluated},
                       {"instances_considered", result.instances_considered},
                       {"selection", result.selection}};
    if (!result.notice.empty()) j["notice"] = result.notice;
}

} // namespace granule
