#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "vadtree/cluster.hpp"
#include "vadtree/errors.hpp"
#include "vadtree/io_util.hpp"
#include "vadtree/tree.hpp"

namespace vadtree {

// The stratified tree: the full binary tree plus its two derived node
// clusters, each tiling [1, num_frames], and the coarse -> fine containment
// map. Cluster entries are indices into tree.nodes.
struct HGTree {
    GranularityTree tree;
    std::vector<int> coarse;
    std::vector<int> fine;
    std::vector<std::vector<int>> parent_map; // aligned with `coarse`
};

// True iff the nodes, sorted by start, concatenate exactly to [1, T]:
// first l is 1, adjacent nodes share their boundary frame, last r is T.
inline bool verify_coverage(const std::vector<EventNode>& cluster, int num_frames) {
    if (cluster.empty()) return false;
    std::vector<const EventNode*> sorted;
    sorted.reserve(cluster.size());
    for (const auto& n : cluster) sorted.push_back(&n);
    std::sort(sorted.begin(), sorted.end(),
              [](const EventNode* a, const EventNode* b) { return a->l < b->l; });
    if (sorted.front()->l != 1) return false;
    for (size_t i = 0; i + 1 < sorted.size(); ++i) {
        if (sorted[i]->r != sorted[i + 1]->l) return false;
    }
    return sorted.back()->r == num_frames;
}

namespace detail {

inline void sort_by_start(std::vector<int>& idxs, const GranularityTree& tree) {
    std::sort(idxs.begin(), idxs.end(), [&](int a, int b) {
        const EventNode& na = tree.nodes[static_cast<size_t>(a)];
        const EventNode& nb = tree.nodes[static_cast<size_t>(b)];
        if (na.l != nb.l) return na.l < nb.l;
        return na.r > nb.r;
    });
}

} // namespace detail

// Keeps only the deepest members: a node survives iff no other node of the
// set lies strictly inside its interval. Node intervals of one tree form a
// laminar family, so strict containment coincides with tree descent.
inline std::vector<int> remove_dup(std::vector<int> node_set, const GranularityTree& tree) {
    detail::sort_by_start(node_set, tree);
    std::vector<int> kept;
    kept.reserve(node_set.size());
    for (size_t i = 0; i < node_set.size(); ++i) {
        const EventNode& cur = tree.nodes[static_cast<size_t>(node_set[i])];
        // In (l asc, r desc) order a node's first strict descendant, if any,
        // is its immediate successor.
        if (i + 1 < node_set.size()) {
            const EventNode& next = tree.nodes[static_cast<size_t>(node_set[i + 1])];
            if (next.l < cur.r) continue;
        }
        kept.push_back(node_set[i]);
    }
    return kept;
}

// Fills every coverage gap of fine_set (leading, interior, trailing) with the
// run of coarse_set nodes whose union is exactly the gap. coarse_set must
// tile [1, T].
inline std::vector<int> complete(std::vector<int> fine_set, const std::vector<int>& coarse_set,
                                 int num_frames, const GranularityTree& tree) {
    std::vector<int> coarse_sorted = coarse_set;
    detail::sort_by_start(coarse_sorted, tree);

    auto fill_gap = [&](int gap_l, int gap_r, std::vector<int>& out) {
        auto it = std::lower_bound(coarse_sorted.begin(), coarse_sorted.end(), gap_l,
                                   [&](int ci, int l) { return tree.nodes[static_cast<size_t>(ci)].l < l; });
        int cursor = gap_l;
        while (it != coarse_sorted.end()) {
            const EventNode& c = tree.nodes[static_cast<size_t>(*it)];
            if (c.l != cursor || c.r > gap_r) break;
            out.push_back(*it);
            cursor = c.r;
            ++it;
            if (cursor == gap_r) return;
        }
        throw internal_consistency("complete: gap [" + std::to_string(gap_l) + ", " +
                                   std::to_string(gap_r) + "] is not a union of coarse nodes");
    };

    detail::sort_by_start(fine_set, tree);
    std::vector<int> result;
    int covered = 1; // next boundary the fine tiling must continue from
    for (int fi : fine_set) {
        const EventNode& f = tree.nodes[static_cast<size_t>(fi)];
        if (f.l > covered) fill_gap(covered, f.l, result);
        result.push_back(fi);
        covered = f.r;
    }
    if (covered < num_frames) {
        fill_gap(covered, num_frames, result);
    }
    detail::sort_by_start(result, tree);
    return result;
}

// Two-way stratification of the tree driven by clustering of all peak
// confidences: nodes whose weaker boundary clears the coarse cluster's
// minimum form the coarse candidates, nodes at or below the fine cluster's
// maximum form the fine candidates. Both clusters are deduplicated, the fine
// one is completed from the coarse one, and both are verified to tile the
// video before the containment map is built.
inline HGTree stratify(GranularityTree tree, const PeakSet& peaks, ClusterMethod method) {
    HGTree hg;

    std::vector<int> s_coarse;
    std::vector<int> s_fine;
    if (peaks.peaks.empty()) {
        for (size_t i = 0; i < tree.nodes.size(); ++i) s_coarse.push_back(static_cast<int>(i));
    } else {
        std::vector<double> values;
        values.reserve(peaks.peaks.size());
        for (const Peak& p : peaks.peaks) values.push_back(p.confidence);
        const ClusterSplit split = cluster_confidences(values, method);
        const double coarse_min = *std::min_element(split.coarse.begin(), split.coarse.end());
        const bool has_fine = !split.fine.empty();
        const double fine_max =
            has_fine ? *std::max_element(split.fine.begin(), split.fine.end()) : 0.0;
        for (size_t i = 0; i < tree.nodes.size(); ++i) {
            const EventNode& n = tree.nodes[i];
            const double weak = std::min(n.conf_l, n.conf_r);
            if (weak >= coarse_min) s_coarse.push_back(static_cast<int>(i));
            if (has_fine && weak <= fine_max) s_fine.push_back(static_cast<int>(i));
        }
    }

    hg.coarse = remove_dup(std::move(s_coarse), tree);
    hg.fine = complete(remove_dup(std::move(s_fine), tree), hg.coarse, tree.num_frames, tree);

    auto materialize = [&](const std::vector<int>& idxs) {
        std::vector<EventNode> nodes;
        nodes.reserve(idxs.size());
        for (int i : idxs) nodes.push_back(tree.nodes[static_cast<size_t>(i)]);
        return nodes;
    };
    if (!verify_coverage(materialize(hg.coarse), tree.num_frames)) {
        throw internal_consistency("stratify: coarse cluster does not tile [1, " +
                                   std::to_string(tree.num_frames) + "] for " + tree.video_id);
    }
    if (!verify_coverage(materialize(hg.fine), tree.num_frames)) {
        throw internal_consistency("stratify: fine cluster does not tile [1, " +
                                   std::to_string(tree.num_frames) + "] for " + tree.video_id);
    }

    hg.parent_map.assign(hg.coarse.size(), {});
    size_t ci = 0;
    for (int fi : hg.fine) {
        const EventNode& f = tree.nodes[static_cast<size_t>(fi)];
        while (ci < hg.coarse.size() &&
               tree.nodes[static_cast<size_t>(hg.coarse[ci])].r < f.r) {
            ++ci;
        }
        if (ci >= hg.coarse.size()) {
            throw internal_consistency("stratify: fine node " + f.node_id +
                                       " has no containing coarse node");
        }
        const EventNode& c = tree.nodes[static_cast<size_t>(hg.coarse[ci])];
        if (!(c.l <= f.l && f.r <= c.r)) {
            throw internal_consistency("stratify: fine node " + f.node_id +
                                       " is not contained in coarse node " + c.node_id);
        }
        hg.parent_map[ci].push_back(fi);
    }

    hg.tree = std::move(tree);
    return hg;
}

// --- serialization ---------------------------------------------------------

inline json hgtree_to_json(const HGTree& hg) {
    json j;
    j["video_id"] = hg.tree.video_id;
    j["num_frames"] = hg.tree.num_frames;
    json nodes = json::array();
    for (const EventNode& n : hg.tree.nodes) {
        json nj;
        nj["node_id"] = n.node_id;
        nj["l"] = n.l;
        nj["r"] = n.r;
        nj["conf_l"] = n.conf_l;
        nj["conf_r"] = n.conf_r;
        nj["depth"] = n.depth;
        nodes.push_back(std::move(nj));
    }
    j["nodes"] = std::move(nodes);
    auto ids = [&](const std::vector<int>& idxs) {
        json arr = json::array();
        for (int i : idxs) arr.push_back(hg.tree.nodes[static_cast<size_t>(i)].node_id);
        return arr;
    };
    j["coarse"] = ids(hg.coarse);
    j["fine"] = ids(hg.fine);
    json pm = json::object();
    for (size_t i = 0; i < hg.coarse.size(); ++i) {
        pm[hg.tree.nodes[static_cast<size_t>(hg.coarse[i])].node_id] = ids(hg.parent_map[i]);
    }
    j["parent_map"] = std::move(pm);
    return j;
}

inline HGTree hgtree_from_json(const json& j) {
    HGTree hg;
    hg.tree.video_id = j.at("video_id").get<std::string>();
    hg.tree.num_frames = j.at("num_frames").get<int>();
    std::map<std::string, int> by_id;
    for (const auto& nj : j.at("nodes")) {
        EventNode n;
        n.node_id = nj.at("node_id").get<std::string>();
        n.l = nj.at("l").get<int>();
        n.r = nj.at("r").get<int>();
        n.conf_l = nj.at("conf_l").get<double>();
        n.conf_r = nj.at("conf_r").get<double>();
        n.depth = nj.at("depth").get<int>();
        by_id[n.node_id] = static_cast<int>(hg.tree.nodes.size());
        hg.tree.nodes.push_back(std::move(n));
    }
    auto lookup = [&](const std::string& id) {
        auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw invalid_input("hgtree: cluster references unknown node " + id);
        }
        return it->second;
    };
    for (const auto& id : j.at("coarse")) hg.coarse.push_back(lookup(id.get<std::string>()));
    for (const auto& id : j.at("fine")) hg.fine.push_back(lookup(id.get<std::string>()));
    hg.parent_map.assign(hg.coarse.size(), {});
    const auto& pm = j.at("parent_map");
    for (size_t i = 0; i < hg.coarse.size(); ++i) {
        const std::string& cid = hg.tree.nodes[static_cast<size_t>(hg.coarse[i])].node_id;
        if (!pm.contains(cid)) {
            throw invalid_input("hgtree: parent_map is missing coarse node " + cid);
        }
        for (const auto& id : pm.at(cid)) hg.parent_map[i].push_back(lookup(id.get<std::string>()));
    }
    return hg;
}

} // namespace vadtree
