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

#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mindmap {

/// Synchronization step index. Step 0 is the empty initial state; the n-th
/// ingested transaction produces step n.
using Step = std::uint64_t;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An item token (e.g. an author name). Identity is exact byte equality.
class ItemLabel {
  public:
    /// Throws Error if the label is empty or whitespace only. The text is
    /// stored unchanged.
    explicit ItemLabel(std::string value);

    const std::string& str() const noexcept { return value_; }

    auto operator<=>(const ItemLabel&) const = default;

  private:
    std::string value_;
};

namespace literals {
inline ItemLabel operator""_item(const char* text, std::size_t size) {
    return ItemLabel(std::string(text, size));
}
}// namespace literals

/// Unordered pair of distinct labels, stored with first() < second().
class PairKey {
  public:
    /// Throws Error("self-pair") when a == b.
    PairKey(ItemLabel a, ItemLabel b);

    const ItemLabel& first() const noexcept { return first_; }
    const ItemLabel& second() const noexcept { return second_; }
    bool contains(const ItemLabel& label) const noexcept { return label == first_ || label == second_; }

    auto operator<=>(const PairKey&) const = default;

  private:
    ItemLabel first_;
    ItemLabel second_;
};

/// A date plus reference number; two records belong to the same
/// transaction iff both components are equal.
struct TransactionId {
    std::chrono::year_month_day date{};
    std::uint64_t ref = 0;

    bool operator==(const TransactionId&) const = default;
};

/// Label -> occurrence count. Iteration order is the label order.
using ItemCounts = std::map<ItemLabel, std::size_t>;

struct Transaction {
    TransactionId tid{};
    ItemCounts items;

    std::size_t distinct() const noexcept { return items.size(); }
};

/// Collapses repeated labels into occurrence counts.
ItemCounts distinct_items(std::span<const ItemLabel> raw_items);

/// Convenience for tests and tools: builds a transaction from raw tokens.
Transaction make_transaction(std::initializer_list<std::string_view> raw_items, TransactionId tid = {});

struct ItemCell {
    ItemLabel label;
    double activation = 0.0;
    Step created_at = 0;
    Step last_activated_at = 0;

    bool operator==(const ItemCell&) const = default;
};

struct Connection {
    PairKey pair;
    double weight = 0.0;
    Step last_reinforced_at = 0;

    bool operator==(const Connection&) const = default;
};

/// Value state of the mind-map. Edges are keyed by canonical pair so every
/// unordered pair is stored once.
struct MindMap {
    std::map<ItemLabel, ItemCell> cells;
    std::map<PairKey, Connection> edges;
    Step step = 0;

    std::size_t cell_count() const noexcept { return cells.size(); }
    std::size_t edge_count() const noexcept { return edges.size(); }

    bool operator==(const MindMap&) const = default;
};

MindMap new_mindmap();

/// Stored weight of {a, b}, or nullopt when no connection exists.
/// Throws Error("self-pair") when a == b.
std::optional<double> get_weight(const MindMap& map, const ItemLabel& a, const ItemLabel& b);

std::optional<double> get_activation(const MindMap& map, const ItemLabel& label);

/// Returns a description of every violated structural invariant (dangling
/// edge endpoints, out-of-range weights/activations, timestamp order).
/// Empty when the map is consistent.
std::vector<std::string> check_invariants(const MindMap& map);

/// Activation assigned to a newly divided item cell before its first boost.
inline constexpr double kInitialActivation = 0.5;

struct EngineParams {
    double eta = 0.5;        // Hebbian learning rate, (0,1]
    double lambda = 0.5;     // activation gain per occurrence, (0,1]
    double beta_w = 0.02;    // edge decay per idle step, [0,1)
    double beta_a = 0.05;    // activation decay per idle step, [0,1)
    double epsilon = 0.01;   // forgetting floor, [0,1), must stay below theta_w
    double theta_w = 0.5;    // skeleton weight threshold, [0,1]
    double theta_a = 0.0;    // skeleton activation threshold, [0,1]
    std::size_t promote_after = 3;

    /// Throws Error naming the first out-of-range parameter.
    void validate() const;

    bool operator==(const EngineParams&) const = default;
};

}// namespace mindmap
