#ifndef GRANULE_AGRSSA_HPP
#define GRANULE_AGRSSA_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "granule/approximation.hpp"
#include "granule/blocks.hpp"
#include "granule/chain.hpp"
#include "granule/info_table.hpp"

namespace granule {

// ---------------------------------------------------------------------------
// Quantile-driven interval boundaries
// ---------------------------------------------------------------------------

enum class EMode {
    global_std_fraction, // e = e_fraction * std dev of the whole column
    local_std_fraction,  // e = e_fraction * std dev between neighbouring cuts
    fixed,               // e = e_fraction taken literally
};

// One quantile cut q with spread e, clamped to the column range.
struct BoundaryCut {
    double q = 0.0;
    double e = 0.0;
    double lo = 0.0; // clamp(q - e)
    double hi = 0.0; // clamp(q + e)

    bool operator==(const BoundaryCut& other) const = default;
};

/**
 * Interval boundaries for one column: the flat sequence
 * bottom, q1-e1, q1+e1, ..., qf-ef, qf+ef, top (clamped, weakly
 * increasing, deduplicated). Consecutive cut pairs delimit overlapping
 * value intervals: [bottom, q1+e1], [q1-e1, q2+e2], ..., [qf-ef, top].
 */
struct BoundarySpec {
    std::string attribute;
    int q = 1;
    EMode e_mode = EMode::global_std_fraction;
    double e_fraction = 0.25;
    double bottom = 0.0;
    double top = 0.0;
    std::vector<BoundaryCut> cuts;

    std::vector<double> boundaries() const; // flat, clamped, deduplicated
};

// Cuts at the j/(q+1) quantiles (median for q=1), each with its e spread.
// Quantiles use the averaging nearest-rank rule: h = p*N picks value h
// when fractional (rounded up), the midpoint of values h and h+1 when
// integral.
BoundarySpec quantile_boundaries(const std::string& attribute, const std::vector<double>& values,
                                 int q, EMode e_mode, double e_fraction);

// Drops cuts across which the decision distribution barely moves: a cut is
// kept iff the total-variation distance between the decision distributions
// on its two sides (windowed by the neighbouring cut centres) is >= delta.
// Column extremes always stay.
BoundarySpec prune_boundaries(const BoundarySpec& spec, const std::vector<double>& values,
                              const std::vector<std::string>& decisions, double delta);

// Maps the value intervals onto the column's rank chain (overlap reading)
// and repairs the family minimally — dropping empty or contained intervals,
// merging equal left endpoints, widening right endpoints leftmost-first to
// close gaps — until it is a valid chain block system. Steps are logged.
ChainBlockSystem intervals_to_chain_blocks(const BoundarySpec& spec, const ColumnRank& ranks,
                                           std::vector<std::string>* repair_log = nullptr);

/**
 * Every distinct chain block system reachable by reading each cut zone as
 * an overlap, a sharp split at its low edge, or a sharp split at its high
 * edge, repaired as above. Systems are in canonical (lexicographic) order;
 * default_index points at the plain all-overlap reading.
 */
struct AlignmentCandidates {
    std::vector<ChainBlockSystem> systems;
    std::vector<std::vector<std::string>> repairs; // aligned with systems
    int default_index = 0;
};

AlignmentCandidates alignment_candidates(const BoundarySpec& spec, const ColumnRank& ranks);

// Full universal block distribution of the n-chain (all tolerance block
// systems).
inline UniversalBlockDistribution ubd_chain(int n) { return enumerate_chain_tolerances(n); }

// ---------------------------------------------------------------------------
// Ranked tables and large-minded reasoners
// ---------------------------------------------------------------------------

// Conditional columns of a deterministic numeric table as rank chains.
struct RankedTable {
    std::vector<std::string> objects;
    std::vector<std::string> attributes;       // conditional attributes, table order
    std::vector<ColumnRank> columns;           // aligned with attributes
    std::vector<std::vector<double>> numeric;  // per attribute, per object
};

RankedTable rank_table(const InformationTable& table);

/**
 * A large-minded reasoner: per-attribute candidate block systems plus a
 * domain restriction. A candidate tuple (one index per attribute) is in
 * the domain iff every index passes its attribute's allowlist (when set)
 * and the extra filter (when set) accepts the tuple.
 */
struct LargeMindedReasoner {
    std::vector<std::string> attributes;
    std::vector<std::vector<ChainBlockSystem>> candidates; // per attribute
    std::vector<std::optional<std::vector<int>>> allow;    // per attribute, sorted positions
    std::function<bool(const std::vector<int>&)> extra_filter;

    bool in_domain(const std::vector<int>& tuple) const;
};

// Product blocks over objects for one candidate tuple, with provenance:
// factors[b] lists every per-attribute interval-index combination whose
// product cell realizes block b.
struct CombinedBlocks {
    BlockSystem blocks;
    std::vector<std::vector<std::vector<int>>> factors;
};

// Applies the reasoner to one tuple: objects are co-grouped iff, on every
// attribute, their value ranks share an interval of the chosen system.
// Out-of-domain tuples are a domain error (the reasoner is partial).
CombinedBlocks lmr_apply(const LargeMindedReasoner& psi, const std::vector<int>& tuple,
                         const RankedTable& ranked);

// ---------------------------------------------------------------------------
// Pipelines
// ---------------------------------------------------------------------------

struct QuantileParams {
    int q = 1;
    EMode e_mode = EMode::global_std_fraction;
    double e_fraction = 0.25;
};

struct AgrssaOptions {
    QuantileParams defaults;
    std::map<std::string, QuantileParams> per_attribute;
    double delta = 0.0;            // boundary-pruning threshold
    std::size_t cap = 1'000'000;   // in-domain candidate-tuple cap
};

struct SelectionRule {
    enum class Kind { max_quality, top_k, threshold } kind = Kind::max_quality;
    int k = 1;         // top_k
    double theta = 0.0; // threshold
};

// One attribute's part of a fitted model.
struct AttributeModel {
    std::string attribute;
    std::vector<Value> chain_values;          // rank -> value
    std::optional<BoundarySpec> boundaries;   // quantile-sourced candidates only
    ChainBlockSystem system;                  // the chosen block system
    std::vector<std::string> repairs;         // repair log of the chosen system
    int chosen_index = 0;                     // position in the candidate list
    int candidate_count = 1;
};

/**
 * A fitted tolerance model: per-attribute chain block systems, the product
 * blocks over objects they induce, and the decision quality (share of
 * objects in some decision-pure block). Carries enough provenance to
 * re-run explanations offline.
 */
struct ToleranceModel {
    std::vector<std::string> objects;
    std::vector<AttributeModel> attributes;
    BlockSystem table_blocks;
    std::vector<std::vector<std::vector<int>>> block_factors; // per block
    std::string decision_attribute;
    std::vector<std::string> class_labels;  // canonical order
    std::vector<int> class_of_object;       // index into class_labels
    double decision_quality = 0.0;
    std::string instance_kind = "sigma";    // "sigma" | "psi"
    std::vector<int> instance_tuple;        // candidate index per attribute
};

// The minimal pipeline: quantile cuts, decision-driven pruning, repaired
// chain blocks per attribute; sigma picks one alignment candidate per
// attribute (empty = the default overlap reading for each).
ToleranceModel agrssa_m(const InformationTable& table, const AgrssaOptions& options,
                        const std::vector<int>& sigma = {});

/**
 * Candidate sourcing for the reasoner pipeline: "ubd" draws per-attribute
 * candidates from the full universal block distribution of each value
 * chain (optionally restricted by explicit enumeration indices); the
 * "alignment" source reuses the quantile pipeline's alignment candidates,
 * honouring delta pruning. Allowlists restrict the domain by candidate
 * position, conjunctively across attributes.
 */
struct PsiConfig {
    enum class Source { ubd, alignment };
    Source source = Source::ubd;
    std::map<std::string, std::vector<int>> candidate_indices;
    std::map<std::string, std::vector<int>> allow;
};

struct ReasonerBundle {
    RankedTable ranked;
    LargeMindedReasoner psi;
    std::vector<std::optional<BoundarySpec>> boundaries; // per attribute
};

ReasonerBundle build_reasoner(const InformationTable& table, const AgrssaOptions& options,
                              const PsiConfig& psi);

struct LmrResult {
    std::vector<ToleranceModel> models;    // ranked: quality desc, tuple asc
    std::size_t instances_evaluated = 0;   // in-domain tuples scored
    std::size_t instances_considered = 0;  // allowlist-admissible tuples visited
    std::string notice;                    // set when the result is empty
    SelectionRule selection;
};

// Scores every in-domain candidate tuple by decision quality, ranks
// descending with lexicographic tie-break on the tuple, and applies the
// selection rule.
LmrResult agrssa_lmr(const InformationTable& table, const AgrssaOptions& options,
                     const PsiConfig& psi, const SelectionRule& selection);

// ---------------------------------------------------------------------------
// Explanations (interpreted reasoner output)
// ---------------------------------------------------------------------------

struct FactorizedBlock {
    int block_index = 0;
    std::vector<int> members;
    // every interval-index combination realizing the block, as intervals,
    // one per attribute
    std::vector<std::vector<ChainInterval>> factorizations;
};

struct Explanation {
    std::vector<int> query;
    std::vector<int> lower;
    std::vector<int> upper;
    std::vector<FactorizedBlock> lower_blocks;
    std::vector<FactorizedBlock> upper_blocks;
};

// Decomposes lower(X) and upper(X) into the model's blocks together with
// their per-attribute chain-interval factors.
Explanation explain(const ToleranceModel& model, const std::vector<int>& x);

std::string render_text(const Explanation& e, const ToleranceModel& model);

// Registers the interpreted-reasoner decomposition as the structured
// transform "psi-star": input is an operator tag ('l' or 'u') plus a
// subset; output is the block decomposition report.
void register_psi_star(RrfRegistry& registry, const ToleranceModel& model);

// ---------------------------------------------------------------------------
// Config and JSON plumbing
// ---------------------------------------------------------------------------

const char* e_mode_name(EMode mode);
EMode parse_e_mode(const std::string& name);

AgrssaOptions agrssa_options_from_json(const nlohmann::json& j);
std::vector<int> sigma_from_json(const nlohmann::json& j);
PsiConfig psi_config_from_json(const nlohmann::json& j);
SelectionRule selection_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const BoundaryCut& cut);
void from_json(const nlohmann::json& j, BoundaryCut& cut);
void to_json(nlohmann::json& j, const BoundarySpec& spec);
void from_json(const nlohmann::json& j, BoundarySpec& spec);
void to_json(nlohmann::json& j, const AttributeModel& am);
void from_json(const nlohmann::json& j, AttributeModel& am);
void to_json(nlohmann::json& j, const ToleranceModel& model);
void from_json(const nlohmann::json& j, ToleranceModel& model);
void to_json(nlohmann::json& j, const SelectionRule& rule);
void to_json(nlohmann::json& j, const FactorizedBlock& fb);
void to_json(nlohmann::json& j, const Explanation& e);
void to_json(nlohmann::json& j, const LmrResult& result);

} // namespace granule

#endif
