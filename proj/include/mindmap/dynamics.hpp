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

#include <set>
#include <utility>
#include <vector>

namespace mindmap {

/// What changed during one synchronization step.
struct StepEvents {
    Step step = 0;
    std::vector<ItemLabel> cells_created;
    std::vector<ItemLabel> cells_merged;   // existing item cells that absorbed input cells
    std::vector<PairKey> edges_created;
    std::vector<PairKey> edges_reinforced;
    std::vector<ItemLabel> cells_forgotten;
    std::vector<PairKey> edges_forgotten;
};

struct Removals {
    std::vector<PairKey> edges;
    std::vector<ItemLabel> cells;
};

/// Weight of a connection created by a transaction with `distinct_items`
/// distinct labels: 1/m. Throws Error("no pairs") for m < 2.
double initial_weight(std::size_t distinct_items);

/// Saturating boost a + gain * (1 - a).
double activate_cell(double activation, double gain);

/// Saturating Hebbian rule min(1, w + rate * a_i * a_j * (1 - w)).
double hebbian_update(double weight, double a_i, double a_j, double rate);

/// Multiplies every edge outside `reinforced` by (1 - beta_w) and every cell
/// outside `activated` by (1 - beta_a).
void decay_pass(MindMap& map, const std::set<PairKey>& reinforced, const std::set<ItemLabel>& activated,
                const EngineParams& params);

/// Drops edges below epsilon, then cells that are isolated and below epsilon.
/// A cell that still has an edge is kept whatever its activation.
Removals prune_forgotten(MindMap& map, double epsilon);

/// Runs one full synchronization step in place: merge duplicates, divide or
/// merge cells, create or reinforce edges, decay, forget, advance the clock.
/// Throws Error before touching the map if a count is zero.
StepEvents apply_transaction(MindMap& map, const Transaction& txn, const EngineParams& params);

/// Value form of apply_transaction.
std::pair<MindMap, StepEvents> ingest_transaction(const MindMap& map, const Transaction& txn,
                                                  const EngineParams& params);

}// namespace mindmap
