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

#include <mindmap/types.hpp>

#include <algorithm>
#include <cctype>
#include <utility>

namespace mindmap {

namespace {

bool is_blank(std::string_view text) {
    return std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

void require(bool ok, const char* what) {
    if (!ok) {
        throw Error(std::string("invalid parameter: ") + what);
    }
}

}// namespace

ItemLabel::ItemLabel(std::string value) : value_(std::move(value)) {
    if (is_blank(value_)) {
        throw Error("item label must not be empty");
    }
}

PairKey::PairKey(ItemLabel a, ItemLabel b) : first_(std::move(a)), second_(std::move(b)) {
    if (first_ == second_) {
        throw Error("self-pair");
    }
    if (second_ < first_) {
        std::swap(first_, second_);
    }
}

ItemCounts distinct_items(std::span<const ItemLabel> raw_items) {
    ItemCounts counts;
    for (const auto& label : raw_items) {
        ++counts[label];
    }
    return counts;
}

Transaction make_transaction(std::initializer_list<std::string_view> raw_items, TransactionId tid) {
    std::vector<ItemLabel> labels;
    labels.reserve(raw_items.size());
    for (auto item : raw_items) {
        labels.emplace_back(std::string(item));
    }
    return Transaction{tid, distinct_items(labels)};
}

MindMap new_mindmap() { return MindMap{}; }

std::optional<double> get_weight(const MindMap& map, const ItemLabel& a, const ItemLabel& b) {
    auto it = map.edges.find(PairKey(a, b));
    if (it == map.edges.end()) {
        return std::nullopt;
    }
    return it->second.weight;
}

std::optional<double> get_activation(const MindMap& map, const ItemLabel& label) {
    auto it = map.cells.find(label);
    if (it == map.cells.end()) {
        return std::nullopt;
    }
    return it->second.activation;
}

std::vector<std::string> check_invariants(const MindMap& map) {
    std::vector<std::string> problems;
    for (const auto& [label, cell] : map.cells) {
        if (cell.label != label) {
            problems.push_back("cell keyed " + label.str() + " carries label " + cell.label.str());
        }
        if (!(cell.activation >= 0.0 && cell.activation <= 1.0)) {
            problems.push_back("activation out of range for " + label.str());
        }
        if (cell.last_activated_at < cell.created_at) {
            problems.push_back("last_activated_at precedes created_at for " + label.str());
        }
    }
    for (const auto& [key, edge] : map.edges) {
        const std::string name = key.first().str() + "|" + key.second().str();
        if (!(edge.pair == key)) {
            problems.push_back("edge keyed " + name + " carries a different pair");
        }
        if (!map.cells.contains(key.first()) || !map.cells.contains(key.second())) {
            problems.push_back("dangling edge " + name);
        }
        if (!(edge.weight >= 0.0 && edge.weight <= 1.0)) {
            problems.push_back("weight out of range for " + name);
        }
    }
    const std::size_t n = map.cells.size();
    if (n > 0 && map.edges.size() > n * (n - 1) / 2) {
        problems.push_back("edge count exceeds n(n-1)/2");
    }
    return problems;
}

void EngineParams::validate() const {
    require(eta > 0.0 && eta <= 1.0, "eta must be in (0,1]");
    require(lambda > 0.0 && lambda <= 1.0, "lambda must be in (0,1]");
    require(beta_w >= 0.0 && beta_w < 1.0, "beta_w must be in [0,1)");
    require(beta_a >= 0.0 && beta_a < 1.0, "beta_a must be in [0,1)");
    require(epsilon >= 0.0 && epsilon < 1.0, "epsilon must be in [0,1)");
    require(theta_w >= 0.0 && theta_w <= 1.0, "theta_w must be in [0,1]");
    require(theta_a >= 0.0 && theta_a <= 1.0, "theta_a must be in [0,1]");
    require(epsilon < theta_w, "epsilon must be below theta_w");
    require(promote_after >= 1, "promote_after must be at least 1");
}

}// namespace mindmap
