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

#include <mindmap/apriori.hpp>
#include <mindmap/engine.hpp>
#include <mindmap/types.hpp>

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace mindmap::testing {

/// A,A,C,D -> B,C,E -> A,B,C,E -> B,C,E
inline std::vector<Transaction> worked_example() {
    return {make_transaction({"A", "A", "C", "D"}), make_transaction({"B", "C", "E"}),
            make_transaction({"A", "B", "C", "E"}), make_transaction({"B", "C", "E"})};
}

inline std::string item_name(std::size_t i) { return "i" + std::to_string(i); }

/// Transactions over `alphabet` items with 0..max_size raw occurrences each
/// (duplicates allowed).
inline std::vector<Transaction> random_stream(std::mt19937_64& rng, std::size_t alphabet, std::size_t count,
                                              std::size_t max_size, std::size_t min_size = 0) {
    std::uniform_int_distribution<std::size_t> size_dist(min_size, max_size);
    std::uniform_int_distribution<std::size_t> item_dist(0, alphabet - 1);
    std::vector<Transaction> out;
    out.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        std::vector<ItemLabel> raw;
        const std::size_t n = size_dist(rng);
        for (std::size_t k = 0; k < n; ++k) {
            raw.emplace_back(item_name(item_dist(rng)));
        }
        out.push_back(Transaction{{}, distinct_items(raw)});
    }
    return out;
}

/// Engine state after a random stream with random parameters. Labels mix in
/// blanks, quotes, backslashes and pipes so serialization escaping is
/// exercised.
inline EngineState random_engine_state(std::mt19937_64& rng) {
    static const std::vector<std::string> names{"A",       "B",      "Jean Dupont", "O'Neil", "say \"hi\"",
                                                "back\\slash", "pi|pe",  "C",           "D",      "E",
                                                "x\ty",   "\"lead", "omega",       "ü-umlaut"};
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    EngineParams p;
    p.eta = 0.1 + 0.9 * unit(rng);
    p.lambda = 0.1 + 0.9 * unit(rng);
    p.beta_w = 0.2 * unit(rng);
    p.beta_a = 0.2 * unit(rng);
    p.epsilon = 0.05 * unit(rng);
    p.theta_w = 0.1 + 0.8 * unit(rng);
    p.theta_a = 0.3 * unit(rng);
    p.promote_after = 1 + rng() % 4;

    Engine engine(p);
    std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
    std::uniform_int_distribution<std::size_t> size(0, 5);
    const std::size_t steps = rng() % 120;
    for (std::size_t t = 0; t < steps; ++t) {
        std::vector<ItemLabel> raw;
        const std::size_t n = size(rng);
        for (std::size_t k = 0; k < n; ++k) {
            raw.emplace_back(names[pick(rng)]);
        }
        engine.process(Transaction{{}, distinct_items(raw)});
    }
    return engine.state();
}

/// Exhaustive support counting over every subset of the alphabet (bitmask
/// enumeration). Independent of the levelwise implementation.
struct BruteForce {
    std::vector<ItemLabel> alphabet;
    std::map<std::uint32_t, std::size_t> support;   // mask -> support, all masks

    explicit BruteForce(const std::vector<Transaction>& txns) {
        std::map<ItemLabel, std::size_t> index;
        for (const auto& txn : txns) {
            for (const auto& [label, count] : txn.items) {
                index.emplace(label, 0);
            }
        }
        for (auto& [label, idx] : index) {
            idx = alphabet.size();
            alphabet.push_back(label);
        }
        std::vector<std::uint32_t> masks;
        for (const auto& txn : txns) {
            std::uint32_t m = 0;
            for (const auto& [label, count] : txn.items) {
                m |= 1U << index.at(label);
            }
            masks.push_back(m);
        }
        const std::uint32_t limit = 1U << alphabet.size();
        for (std::uint32_t s = 1; s < limit; ++s) {
            std::size_t n = 0;
            for (auto m : masks) {
                n += (m & s) == s ? 1 : 0;
            }
            support[s] = n;
        }
    }

    ItemSet to_set(std::uint32_t mask) const {
        ItemSet set;
        for (std::size_t i = 0; i < alphabet.size(); ++i) {
            if (mask & (1U << i)) {
                set.items.push_back(alphabet[i]);
            }
        }
        set.support = support.at(mask);
        return set;
    }

    std::vector<ItemSet> frequent(std::size_t minsup) const {
        std::vector<ItemSet> out;
        for (const auto& [mask, n] : support) {
            if (n >= minsup) {
                out.push_back(to_set(mask));
            }
        }
        std::sort(out.begin(), out.end(), [](const ItemSet& a, const ItemSet& b) {
            if (a.items.size() != b.items.size()) {
                return a.items.size() < b.items.size();
            }
            return a.items < b.items;
        });
        return out;
    }

    /// Level-k sets whose every (k-1)-subset is frequent but which are not
    /// frequent themselves.
    std::vector<ItemSet> negative_border(std::size_t k, std::size_t minsup) const {
        std::vector<ItemSet> out;
        for (const auto& [mask, n] : support) {
            if (static_cast<std::size_t>(__builtin_popcount(mask)) != k || n >= minsup) {
                continue;
            }
            bool subsets_frequent = true;
            for (std::size_t i = 0; i < alphabet.size(); ++i) {
                const std::uint32_t bit = 1U << i;
                if ((mask & bit) && k > 1 && support.at(mask & ~bit) < minsup) {
                    subsets_frequent = false;
                }
            }
            if (subsets_frequent) {
                out.push_back(to_set(mask));
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

}// namespace mindmap::testing

#ifdef DOCTEST_LIBRARY_INCLUDED
namespace doctest {
template<>
struct StringMaker<mindmap::ItemSet> {
    static String convert(const mindmap::ItemSet& set) {
        std::string out = "{";
        for (const auto& item : set.items) {
            out += item.str();
        }
        return (out + "}:" + std::to_string(set.support)).c_str();
    }
};
template<>
struct StringMaker<std::vector<mindmap::ItemSet>> {
    static String convert(const std::vector<mindmap::ItemSet>& sets) {
        String out = "[";
        for (const auto& set : sets) {
            out += StringMaker<mindmap::ItemSet>::convert(set) + " ";
        }
        return out + "]";
    }
};
}// namespace doctest
#endif
