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

#include <mindmap/apriori.hpp>

#include <algorithm>
#include <iterator>
#include <map>
#include <set>

namespace mindmap {

namespace {

using Items = std::vector<ItemLabel>;

std::vector<Items> as_item_vectors(const std::vector<Transaction>& txns) {
    std::vector<Items> out;
    out.reserve(txns.size());
    for (const auto& txn : txns) {
        Items items;
        items.reserve(txn.items.size());
        for (const auto& [label, count] : txn.items) {
            items.push_back(label);
        }
        out.push_back(std::move(items));
    }
    return out;
}

std::size_t count_support(const std::vector<Items>& db, const Items& candidate) {
    return static_cast<std::size_t>(std::count_if(db.begin(), db.end(), [&](const Items& txn) {
        return std::includes(txn.begin(), txn.end(), candidate.begin(), candidate.end());
    }));
}

/// Joins F_{k-1} with itself on the shared (k-2)-prefix and drops candidates
/// with an infrequent (k-1)-subset.
std::vector<Items> join_and_prune(const std::vector<ItemSet>& previous) {
    std::set<Items> frequent;
    for (const auto& set : previous) {
        frequent.insert(set.items);
    }

    std::vector<Items> out;
    for (std::size_t i = 0; i < previous.size(); ++i) {
        const Items& a = previous[i].items;
        for (std::size_t j = i + 1; j < previous.size(); ++j) {
            const Items& b = previous[j].items;
            if (!std::equal(a.begin(), a.end() - 1, b.begin(), b.end() - 1)) {
                // previous is sorted, so no later b shares a's prefix either
                break;
            }
            Items candidate = a;
            candidate.push_back(b.back());

            bool all_subsets_frequent = true;
            for (std::size_t drop = 0; drop + 2 < candidate.size() && all_subsets_frequent; ++drop) {
                Items subset;
                subset.reserve(candidate.size() - 1);
                for (std::size_t k = 0; k < candidate.size(); ++k) {
                    if (k != drop) {
                        subset.push_back(candidate[k]);
                    }
                }
                all_subsets_frequent = frequent.contains(subset);
            }
            if (all_subsets_frequent) {
                out.push_back(std::move(candidate));
            }
        }
    }
    return out;
}

}// namespace

std::vector<AprioriLevel> apriori_levels(const std::vector<Transaction>& txns, std::size_t minsup) {
    if (minsup == 0) {
        throw Error("minsup must be at least 1");
    }
    const std::vector<Items> db = as_item_vectors(txns);

    std::vector<Items> candidates;
    {
        std::set<ItemLabel> alphabet;
        for (const auto& txn : db) {
            alphabet.insert(txn.begin(), txn.end());
        }
        for (const auto& label : alphabet) {
            candidates.push_back({label});
        }
    }

    std::vector<AprioriLevel> levels;
    for (std::size_t k = 1; !candidates.empty(); ++k) {
        AprioriLevel level;
        level.candidates.level = k;
        for (auto& items : candidates) {
            const std::size_t support = count_support(db, items);
            ItemSet set{std::move(items), support};
            if (support >= minsup) {
                level.frequent.push_back(set);
            }
            level.candidates.sets.push_back(std::move(set));
        }
        std::sort(level.candidates.sets.begin(), level.candidates.sets.end());
        std::sort(level.frequent.begin(), level.frequent.end());
        const bool done = level.frequent.empty();
        candidates = done ? std::vector<Items>{} : join_and_prune(level.frequent);
        levels.push_back(std::move(level));
    }
    return levels;
}

std::vector<ItemSet> apriori(const std::vector<Transaction>& txns, std::size_t minsup) {
    std::vector<ItemSet> all;
    for (auto& level : apriori_levels(txns, minsup)) {
        std::move(level.frequent.begin(), level.frequent.end(), std::back_inserter(all));
    }
    return all;
}

std::vector<StaticRule> gen_rules(const std::vector<ItemSet>& frequent, double minconf) {
    std::map<Items, std::size_t> support;
    for (const auto& set : frequent) {
        support.emplace(set.items, set.support);
    }
    auto lookup = [&](const Items& items) {
        auto it = support.find(items);
        if (it == support.end()) {
            throw Error("inconsistent input");
        }
        return it->second;
    };

    std::vector<StaticRule> rules;
    for (const auto& set : frequent) {
        const std::size_t n = set.items.size();
        if (n < 2) {
            continue;
        }
        if (n >= 63) {
            throw Error("itemset too large for rule generation");
        }
        const std::uint64_t full = (std::uint64_t{1} << n) - 1;
        for (std::uint64_t mask = 1; mask < full; ++mask) {
            Items antecedent;
            Items consequent;
            for (std::size_t i = 0; i < n; ++i) {
                ((mask >> i) & 1U ? antecedent : consequent).push_back(set.items[i]);
            }
            const std::size_t ant_support = lookup(antecedent);
            const std::size_t cons_support = lookup(consequent);
            if (ant_support == 0) {
                continue;
            }
            const double confidence = static_cast<double>(set.support) / static_cast<double>(ant_support);
            if (confidence >= minconf) {
                rules.push_back({{std::move(antecedent), ant_support},
                                 {std::move(consequent), cons_support},
                                 set.support,
                                 confidence});
            }
        }
    }
    std::sort(rules.begin(), rules.end(), [](const StaticRule& a, const StaticRule& b) {
        if (a.antecedent.items != b.antecedent.items) {
            return a.antecedent.items < b.antecedent.items;
        }
        return a.consequent.items < b.consequent.items;
    });
    return rules;
}

std::vector<ItemSet> negative_border(const CandidateSet& candidates, const std::vector<ItemSet>& frequent_k) {
    auto at_level = [&](const ItemSet& set) { return set.items.size() == candidates.level; };
    if (!std::all_of(candidates.sets.begin(), candidates.sets.end(), at_level) ||
        !std::all_of(frequent_k.begin(), frequent_k.end(), at_level)) {
        throw Error("level mismatch between candidates and frequent sets");
    }
    std::set<Items> frequent;
    for (const auto& set : frequent_k) {
        frequent.insert(set.items);
    }
    std::vector<ItemSet> border;
    for (const auto& set : candidates.sets) {
        if (!frequent.contains(set.items)) {
            border.push_back(set);
        }
    }
    std::sort(border.begin(), border.end());
    return border;
}

}// namespace mindmap
