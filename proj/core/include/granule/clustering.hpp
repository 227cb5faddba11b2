#ifndef GRANULE_CLUSTERING_HPP
#define GRANULE_CLUSTERING_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "granule/approximation.hpp"
#include "granule/blocks.hpp"
#include "granule/info_table.hpp"
#include "granule/tolerance.hpp"

namespace granule {

/**
 * A clustering as pairs (core, exterior): cores are pairwise disjoint and
 * each exterior is disjoint from its own core. A hard clustering has empty
 * exteriors and cores partitioning the universe.
 */
enum class ClusterKind { soft, hard };

struct SoftCluster {
    std::vector<int> core;
    std::vector<int> exterior;
};

struct SoftClustering {
    ClusterKind kind = ClusterKind::soft;
    std::vector<SoftCluster> clusters;
};

struct ClusterCheck {
    bool ok = true;
    std::string violation; // first violated invariant, empty when ok
};

ClusterCheck check_clustering(const SoftClustering& c, int universe_size);

// 1 - (xi5(lower(X), X) + xi5(X, upper(X))) / 2: how much of X escapes its
// lower approximation and how much the upper approximation exceeds X.
// 1 for empty X.
double closeness(const BlockSystem& bs, const std::vector<int>& x);

enum class Verdict { valid, marginal, invalid };

struct ValidationThresholds {
    double valid_at = 0.8;     // score >= valid_at -> valid
    double invalid_below = 0.5; // score < invalid_below -> invalid
    bool include_exteriors = false; // fold exterior closeness into scores, by size
};

struct ClusterValidation {
    GranularApproximation core_approximation;
    GranularApproximation exterior_approximation;
    double core_accuracy = 1.0;
    double core_closeness = 1.0;
    double exterior_closeness = 1.0;
    double score = 1.0; // what the verdict is read from
    Verdict verdict = Verdict::valid;
};

struct ValidationReport {
    std::vector<ClusterValidation> per_cluster;
    double overall_score = 1.0;
    Verdict overall_verdict = Verdict::valid;
    // model provenance: the combined tolerance's blocks plus the inputs
    // that produced them
    BlockSystem model_blocks;
    std::vector<DistanceSpec> distance_specs;
    CombineMode combine_mode;
    ValidationThresholds thresholds;
    std::vector<std::string> objects;
};

/**
 * Validates a clustering against the rough model the distance specs induce:
 * builds the combined tolerance and its blocks, approximates every core and
 * exterior, and scores each cluster by closeness. The verdict is valid at
 * score >= valid_at, invalid below invalid_below, marginal between; the
 * overall score is the core-size-weighted mean of cluster scores, and the
 * overall verdict is valid only when no cluster is individually invalid.
 */
ValidationReport validate_clusters(const InformationTable& table, const SoftClustering& c,
                                   const std::vector<DistanceSpec>& specs,
                                   const CombineMode& mode,
                                   const ValidationThresholds& thresholds = {});

const char* verdict_name(Verdict v);

// {"kind":"soft","clusters":[{"core":[...],"exterior":[...]}]} — members are
// object ids (strings) or plain indices; resolve_clustering maps ids.
void to_json(nlohmann::json& j, const SoftClustering& c);
SoftClustering clustering_from_json(const nlohmann::json& j, const InformationTable& table);
SoftClustering clustering_from_json(const nlohmann::json& j, int universe_size);

void to_json(nlohmann::json& j, const ClusterValidation& cv);
void to_json(nlohmann::json& j, const ValidationReport& report);

} // namespace granule

#endif
