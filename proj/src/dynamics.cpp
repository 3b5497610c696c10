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

#include <mindmap/dynamics.hpp>

#include <algorithm>

namespace mindmap {

double initial_weight(std::size_t distinct_items) {
    if (distinct_items < 2) {
        throw Error("no pairs");
    }
    return 1.0 / static_cast<double>(distinct_items);
}

double activate_cell(double activation, double gain) { return activation + gain * (1.0 - activation); }

double hebbian_update(double weight, double a_i, double a_j, double rate) {
    return std::min(1.0, weight + rate * a_i * a_j * (1.0 - weight));
}

void decay_pass(MindMap& map, const std::set<PairKey>& reinforced, const std::set<ItemLabel>& activated,
                const EngineParams& params) {
    const double keep_w = 1.0 - params.beta_w;
    const double keep_a = 1.0 - params.beta_a;
    for (auto& [key, edge] : map.edges) {
        if (!reinforced.contains(key)) {
            edge.weight *= keep_w;
        }
    }
    for (auto& [label, cell] : map.cells) {
        if (!activated.contains(label)) {
            cell.activation *= keep_a;
        }
    }
}

Removals prune_forgotten(MindMap& map, double epsilon) {
    Removals removed;
    for (auto it = map.edges.begin(); it != map.edges.end();) {
        if (it->second.weight < epsilon) {
            removed.edges.push_back(it->first);
            it = map.edges.erase(it);
        } else {
            ++it;
        }
    }

    std::set<ItemLabel> pinned;
    for (const auto& [key, edge] : map.edges) {
        pinned.insert(key.first());
        pinned.insert(key.second());
    }
    for (auto it = map.cells.begin(); it != map.cells.end();) {
        if (!pinned.contains(it->first) && it->second.activation < epsilon) {
            removed.cells.push_back(it->first);
            it = map.cells.erase(it);
        } else {
            ++it;
        }
    }
    return removed;
}

StepEvents apply_transaction(MindMap& map, const Transaction& txn, const EngineParams& params) {
    for (const auto& [label, count] : txn.items) {
        if (count == 0) {
            throw Error("transaction item '" + label.str() + "' has zero occurrences");
        }
    }

    const Step now = map.step + 1;
    StepEvents events;
    events.step = now;

    // Input cells merge into item cells: one boost per occurrence.
    std::set<ItemLabel> activated;
    for (const auto& [label, count] : txn.items) {
        auto it = map.cells.find(label);
        if (it == map.cells.end()) {
            it = map.cells.emplace(label, ItemCell{label, kInitialActivation, now, now}).first;
            events.cells_created.push_back(label);
        } else {
            events.cells_merged.push_back(label);
        }
        ItemCell& cell = it->second;
        for (std::size_t i = 0; i < count; ++i) {
            cell.activation = activate_cell(cell.activation, params.lambda);
        }
        cell.last_activated_at = now;
        activated.insert(label);
    }

    std::set<PairKey> touched;
    if (txn.distinct() >= 2) {
        const double w0 = initial_weight(txn.distinct());
        for (auto i = txn.items.begin(); i != txn.items.end(); ++i) {
            for (auto j = std::next(i); j != txn.items.end(); ++j) {
                PairKey key(i->first, j->first);
                auto edge = map.edges.find(key);
                if (edge == map.edges.end()) {
                    map.edges.emplace(key, Connection{key, w0, now});
                    events.edges_created.push_back(key);
                } else {
                    const double a_i = map.cells.at(key.first()).activation;
                    const double a_j = map.cells.at(key.second()).activation;
                    edge->second.weight = hebbian_update(edge->second.weight, a_i, a_j, params.eta);
                    edge->second.last_reinforced_at = now;
                    events.edges_reinforced.push_back(key);
                }
                touched.insert(std::move(key));
            }
        }
    }

    decay_pass(map, touched, activated, params);

    Removals removed = prune_forgotten(map, params.epsilon);
    events.edges_forgotten = std::move(removed.edges);
    events.cells_forgotten = std::move(removed.cells);

    map.step = now;
    return events;
}

std::pair<MindMap, StepEvents> ingest_transaction(const MindMap& map, const Transaction& txn,
                                                  const EngineParams& params) {
    MindMap next = map;
    StepEvents events = apply_transaction(next, txn, params);
    return {std::move(next), std::move(events)};
}

}// namespace mindmap
