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

#include <mindmap/skeleton.hpp>

#include <algorithm>
#include <deque>

namespace mindmap {

double Skeleton::mean_weight() const noexcept {
    if (edges.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& [key, weight] : edges) {
        sum += weight;
    }
    return sum / static_cast<double>(edges.size());
}

Skeleton extract_skeleton(const MindMap& map, double theta_w, double theta_a) {
    Skeleton skeleton;
    skeleton.source_step = map.step;
    for (const auto& [key, edge] : map.edges) {
        if (edge.weight < theta_w) {
            continue;
        }
        if (map.cells.at(key.first()).activation < theta_a || map.cells.at(key.second()).activation < theta_a) {
            continue;
        }
        skeleton.edges.emplace(key, edge.weight);
        skeleton.nodes.insert(key.first());
        skeleton.nodes.insert(key.second());
    }
    return skeleton;
}

std::vector<AssociationRule> derive_rules(const Skeleton& skeleton) {
    std::vector<AssociationRule> rules;
    rules.reserve(2 * skeleton.edges.size());
    for (const auto& [key, weight] : skeleton.edges) {
        rules.push_back({key.first(), key.second(), weight});
        rules.push_back({key.second(), key.first(), weight});
    }
    std::sort(rules.begin(), rules.end());
    return rules;
}

std::vector<Skeleton> connected_components(const Skeleton& skeleton) {
    std::map<ItemLabel, std::vector<ItemLabel>> adjacency;
    for (const auto& node : skeleton.nodes) {
        adjacency[node];
    }
    for (const auto& [key, weight] : skeleton.edges) {
        adjacency[key.first()].push_back(key.second());
        adjacency[key.second()].push_back(key.first());
    }

    std::vector<Skeleton> components;
    std::set<ItemLabel> seen;
    // adjacency iterates in label order, so each component starts at its
    // smallest label and components come out in that order.
    for (const auto& [start, unused] : adjacency) {
        if (seen.contains(start)) {
            continue;
        }
        Skeleton component;
        component.source_step = skeleton.source_step;
        std::deque<ItemLabel> frontier{start};
        seen.insert(start);
        while (!frontier.empty()) {
            ItemLabel node = frontier.front();
            frontier.pop_front();
            for (const auto& next : adjacency.at(node)) {
                if (seen.insert(next).second) {
                    frontier.push_back(next);
                }
            }
            component.nodes.insert(std::move(node));
        }
        for (const auto& [key, weight] : skeleton.edges) {
            if (component.nodes.contains(key.first())) {
                component.edges.emplace(key, weight);
            }
        }
        components.push_back(std::move(component));
    }
    return components;
}

std::vector<Skeleton> strongest_subgraphs(const MindMap& map, double theta_w, std::size_t top_k) {
    if (top_k == 0) {
        throw Error("top_k must be at least 1");
    }
    std::vector<Skeleton> ranked = connected_components(extract_skeleton(map, theta_w, 0.0));
    std::stable_sort(ranked.begin(), ranked.end(), [](const Skeleton& a, const Skeleton& b) {
        const double ma = a.mean_weight();
        const double mb = b.mean_weight();
        if (ma != mb) {
            return ma > mb;
        }
        if (a.nodes.size() != b.nodes.size()) {
            return a.nodes.size() > b.nodes.size();
        }
        return *a.nodes.begin() < *b.nodes.begin();
    });
    if (ranked.size() > top_k) {
        ranked.erase(ranked.begin() + static_cast<std::ptrdiff_t>(top_k), ranked.end());
    }
    return ranked;
}

}// namespace mindmap
