#include "granule/clustering.hpp"

#include <algorithm>

namespace granule {

namespace {

std::vector<int> normalized(std::vector<int> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

} // namespace

ClusterCheck check_clustering(const SoftClustering& c, int universe_size) {
    std::vector<int> owner(static_cast<std::size_t>(universe_size), -1);
    for (std::size_t i = 0; i < c.clusters.size(); ++i) {
        const auto core = normalized(c.clusters[i].core);
        const auto exterior = normalized(c.clusters[i].exterior);
        for (int v : core) {
            if (v < 0 || v >= universe_size)
                fail(errc::bounds, "cluster member " + std::to_string(v) +
                                       " outside universe of " + std::to_string(universe_size));
            if (owner[static_cast<std::size_t>(v)] >= 0)
                return {false, "cores not disjoint: object " + std::to_string(v) +
                                   " lies in cores " +
                                   std::to_string(owner[static_cast<std::size_t>(v)]) + " and " +
                                   std::to_string(i)};
            owner[static_cast<std::size_t>(v)] = static_cast<int>(i);
        }
        for (int v : exterior) {
            if (v < 0 || v >= universe_size)
                fail(errc::bounds, "cluster member " + std::to_string(v) +
                                       " outside universe of " + std::to_string(universe_size));
            if (std::binary_search(core.begin(), core.end(), v))
                return {false, "exterior meets own core: object " + std::to_string(v) +
                                   " in cluster " + std::to_string(i)};
        }
    }
    if (c.kind == ClusterKind::hard) {
        for (std::size_t i = 0; i < c.clusters.size(); ++i) {
            if (!c.clusters[i].exterior.empty())
                return {false,
                        "hard clustering has a nonempty exterior in cluster " + std::to_string(i)};
        }
        for (int v = 0; v < universe_size; ++v) {
            if (owner[static_cast<std::size_t>(v)] < 0)
                return {false, "cores do not cover the universe: object " + std::to_string(v) +
                                   " unassigned"};
        }
    }
    return {true, ""};
}

double closeness(const BlockSystem& bs, const std::vector<int>& x) {
    GranularApproximation g = approximate(bs, x);
    if (g.query.empty()) return 1.0;
    double missed_by_lower = xi5(g.lower, g.query);
    double excess_of_upper = xi5(g.query, g.upper);
    return 1.0 - 0.5 * (missed_by_lower + excess_of_upper);
}

namespace {

Verdict verdict_of(double score, const ValidationThresholds& t) {
    if (score >= t.valid_at) return Verdict::valid;
    if (score < t.invalid_below) return Verdict::invalid;
    return Verdict::marginal;
}

} // namespace

ValidationReport validate_clusters(const InformationTable& table, const SoftClustering& c,
                                   const std::vector<DistanceSpec>& specs,
                                   const CombineMode& mode,
                                   const ValidationThresholds& thresholds) {
    if (thresholds.invalid_below > thresholds.valid_at)
        fail(errc::parameter, "threshold misorder: the invalid bound exceeds the valid bound");
    const int universe = static_cast<int>(table.objects.size());
    ClusterCheck check = check_clustering(c, universe);
    if (!check.ok) fail(errc::parameter, "clustering invalid: " + check.violation);

    ValidationReport report;
    report.distance_specs = specs;
    report.combine_mode = mode;
    report.thresholds = thresholds;
    report.objects = table.objects;

    Tolerance combined = similarity_matrix(table, specs, mode);
    report.model_blocks = blocks(combined);

    double weighted_sum = 0.0;
    double weight_total = 0.0;
    bool any_invalid = false;
    for (const auto& cluster : c.clusters) {
        ClusterValidation cv;
        cv.core_approximation = approximate(report.model_blocks, cluster.core);
        cv.exterior_approximation = approximate(report.model_blocks, cluster.exterior);
        cv.core_accuracy = accuracy(report.model_blocks, cluster.core);
        cv.core_closeness = closeness(report.model_blocks, cluster.core);
        cv.exterior_closeness = closeness(report.model_blocks, cluster.exterior);

        double weight = static_cast<double>(cv.core_approximation.query.size());
        cv.score = cv.core_closeness;
        if (thresholds.include_exteriors) {
            double ext_weight = static_cast<double>(cv.exterior_approximation.query.size());
            if (weight + ext_weight > 0)
                cv.score = (weight * cv.core_closeness + ext_weight * cv.exterior_closeness) /
                           (weight + ext_weight);
            weight += ext_weight;
        }
        cv.verdict = verdict_of(cv.score, thresholds);
        any_invalid = any_invalid || cv.verdict == Verdict::invalid;

        weighted_sum += weight * cv.score;
        weight_total += weight;
        report.per_cluster.push_back(std::move(cv));
    }

    report.overall_score = weight_total > 0 ? weighted_sum / weight_total : 1.0;
    if (report.overall_score < thresholds.invalid_below) {
        report.overall_verdict = Verdict::invalid;
    } else if (report.overall_score >= thresholds.valid_at && !any_invalid) {
        report.overall_verdict = Verdict::valid;
    } else {
        report.overall_verdict = Verdict::marginal;
    }
    return report;
}

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::valid: return "valid";
    case Verdict::marginal: return "marginal";
    case Verdict::invalid: return "invalid";
    }
    return "?";
}

void to_json(nlohmann::json& j, const SoftClustering& c) {
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& cluster : c.clusters)
        clusters.push_back({{"core", cluster.core}, {"exterior", cluster.exterior}});
    j = nlohmann::json{{"kind", c.kind == ClusterKind::hard ? "hard" : "soft"},
                       {"clusters", std::move(clusters)}};
}

namespace {

SoftClustering parse_clustering(const nlohmann::json& j,
                                const std::function<int(const nlohmann::json&)>& resolve) {
    if (!j.is_object() || !j.contains("clusters"))
        fail(errc::schema, "clustering JSON needs {\"kind\":..., \"clusters\":[...]}");
    SoftClustering c;
    if (j.contains("kind")) {
        std::string kind = j["kind"].get<std::string>();
        if (kind == "soft") {
            c.kind = ClusterKind::soft;
        } else if (kind == "hard") {
            c.kind = ClusterKind::hard;
        } else {
            fail(errc::schema, "clustering kind must be \"soft\" or \"hard\", not '" + kind + "'");
        }
    }
    if (!j["clusters"].is_array()) fail(errc::schema, "clusters must be an array");
    for (const auto& jc : j["clusters"]) {
        if (!jc.is_object() || !jc.contains("core"))
            fail(errc::schema, "each cluster needs at least a core member list");
        SoftCluster cluster;
        for (const auto& m : jc["core"]) cluster.core.push_back(resolve(m));
        if (jc.contains("exterior")) {
            for (const auto& m : jc["exterior"]) cluster.exterior.push_back(resolve(m));
        }
        cluster.core = normalized(std::move(cluster.core));
        cluster.exterior = normalized(std::move(cluster.exterior));
        c.clusters.push_back(std::move(cluster));
    }
    return c;
}

} // namespace

SoftClustering clustering_from_json(const nlohmann::json& j, const InformationTable& table) {
    return parse_clustering(j, [&table](const nlohmann::json& m) -> int {
        if (m.is_number_integer()) return m.get<int>();
        if (m.is_string()) {
            std::string id = m.get<std::string>();
            int idx = table.object_index(id);
            if (idx < 0) fail(errc::schema, "unknown object id '" + id + "' in clustering");
            return idx;
        }
        fail(errc::schema, "cluster members must be object ids or indices");
    });
}

SoftClustering clustering_from_json(const nlohmann::json& j, int universe_size) {
    return parse_clustering(j, [universe_size](const nlohmann::json& m) -> int {
        if (!m.is_number_integer())
            fail(errc::schema, "cluster members must be object indices here");
        int v = m.get<int>();
        if (v < 0 || v >= universe_size)
            fail(errc::bounds, "cluster member " + std::to_string(v) + " outside universe of " +
                                   std::to_string(universe_size));
        return v;
    });
}

void to_json(nlohmann::json& j, const ClusterValidation& cv) {
    j = nlohmann::json{{"core_approximation", cv.core_approximation},
                       {"exterior_approximation", cv.exterior_approximation},
                       {"core_accuracy", cv.core_accuracy},
                       {"core_closeness", cv.core_closeness},
                       {"exterior_closeness", cv.exterior_closeness},
                       {"score", cv.score},
                       {"verdict", verdict_name(cv.verdict)}};
}

void to_json(nlohmann::json& j, const ValidationReport& report) {
    nlohmann::json thresholds{{"valid_at", report.thresholds.valid_at},
                              {"invalid_below", report.thresholds.invalid_below},
                              {"include_exteriors", report.thresholds.include_exteriors}};
    j = nlohmann::json{
        {"clusters", report.per_cluster},
        {"overall", nlohmann::json{{"score", report.overall_score},
                                   {"verdict", verdict_name(report.overall_verdict)}}},
        {"model", nlohmann::json{{"blocks", report.model_blocks},
                                 {"distances", report.distance_specs},
                                 {"mode", report.combine_mode},
                                 {"thresholds", std::move(thresholds)}}},
        {"objects", report.objects}};
}

} // namespace granule
