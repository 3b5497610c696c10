/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#pragma once

#include <mindmap/types.hpp>

#include <map>
#include <set>
#include <vector>

namespace mindmap {

/// Thresholded view of a mind-map: the connections strong enough to count
/// as associations, plus their endpoints.
struct Skeleton {
    std::set<ItemLabel> nodes;
    std::map<PairKey, double> edges;
    Step source_step = 0;

    double mean_weight() const noexcept;
    bool empty() const noexcept { return nodes.empty(); }

    bool operator==(const Skeleton&) const = default;
};

/// Directed reading of one undirected skeleton edge.
struct AssociationRule {
    ItemLabel antecedent;
    ItemLabel consequent;
    double weight = 0.0;

    auto operator<=>(const AssociationRule&) const = default;
};

/// Keeps connections with weight >= theta_w whose endpoints both have
/// activation >= theta_a. Nodes are the endpoints of kept connections.
Skeleton extract_skeleton(const MindMap& map, double theta_w, double theta_a);

/// Both directions of every skeleton edge, sorted by (antecedent, consequent).
std::vector<AssociationRule> derive_rules(const Skeleton& skeleton);

/// Connected components, ordered by their smallest node label.
std::vector<Skeleton> connected_components(const Skeleton& skeleton);

/// Components of extract_skeleton(map, theta_w, 0) ranked by mean edge weight
/// descending, then node count descending, then smallest label ascending.
/// Returns at most top_k entries; throws Error when top_k is zero.
std::vector<Skeleton> strongest_subgraphs(const MindMap& map, double theta_w, std::size_t top_k);

}// namespace mindmap
