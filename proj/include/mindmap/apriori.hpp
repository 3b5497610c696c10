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

#include <vector>

namespace mindmap {

/// Sorted set of labels with an absolute support count.
struct ItemSet {
    std::vector<ItemLabel> items;
    std::size_t support = 0;

    auto operator<=>(const ItemSet&) const = default;
};

/// Level-k candidates (C_k), each with its counted support.
struct CandidateSet {
    std::size_t level = 0;
    std::vector<ItemSet> sets;
};

struct AprioriLevel {
    CandidateSet candidates;
    std::vector<ItemSet> frequent;
};

struct StaticRule {
    ItemSet antecedent;
    ItemSet consequent;
    std::size_t support = 0;
    double confidence = 0.0;
};

/// Levelwise Apriori keeping every pass's candidates alongside F_k. The last
/// level returned is the first one whose frequent set is empty, unless the
/// candidates ran out first. Duplicate items in a transaction count once.
/// Throws Error when minsup is zero.
std::vector<AprioriLevel> apriori_levels(const std::vector<Transaction>& txns, std::size_t minsup);

/// All frequent itemsets, ordered by size and then lexicographically.
std::vector<ItemSet> apriori(const std::vector<Transaction>& txns, std::size_t minsup);

/// Rules X => Y for every frequent set of size >= 2 and every non-empty
/// proper subset X, kept when confidence >= minconf. Throws
/// Error("inconsistent input") if a needed subset support is missing.
std::vector<StaticRule> gen_rules(const std::vector<ItemSet>& frequent, double minconf);

/// C_k - F_k, canonical order. Throws Error when the inputs are not all of
/// the candidate level.
std::vector<ItemSet> negative_border(const CandidateSet& candidates, const std::vector<ItemSet>& frequent_k);

}// namespace mindmap
