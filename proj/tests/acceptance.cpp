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

// One line per acceptance criterion. Exit status is nonzero if any fails.

#include <mindmap/apriori.hpp>
#include <mindmap/dynamics.hpp>
#include <mindmap/engine.hpp>
#include <mindmap/skeleton.hpp>
#include <mindmap/snapshot.hpp>
#include <mindmap/stream.hpp>

#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using namespace mindmap;
using namespace mindmap::literals;
using mindmap::testing::worked_example;

namespace {

constexpr double kExactTol = 1e-12;
constexpr double kReplayBudgetSeconds = 1.0;
constexpr double kAprioriBudgetSeconds = 10.0;

/// Failure notes collected while a criterion runs.
struct Check {
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            failures.push_back(what);
        }
    }
    void near(double got, double want, double tol, const std::string& what) {
        if (!(std::fabs(got - want) <= tol)) {
            char buffer[160];
            std::snprintf(buffer, sizeof buffer, "%s: got %.17g want %.17g", what.c_str(), got, want);
            failures.emplace_back(buffer);
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Plain reference model of the update rules, written straight from the rule
// list with string keys and no shared code.
struct Reference {
    EngineParams p;
    std::map<std::string, double> act;
    std::map<std::pair<std::string, std::string>, double> w;

    void step(const std::vector<std::string>& occurrences) {
        std::set<std::string> touched;
        for (const auto& item : occurrences) {
            if (!act.count(item)) {
                act[item] = kInitialActivation;
            }
            act[item] += p.lambda * (1.0 - act[item]);
            touched.insert(item);
        }
        const std::vector<std::string> items(touched.begin(), touched.end());
        std::set<std::pair<std::string, std::string>> reinforced;
        for (std::size_t i = 0; i < items.size(); ++i) {
            for (std::size_t j = i + 1; j < items.size(); ++j) {
                const auto key = std::make_pair(items[i], items[j]);
                reinforced.insert(key);
                auto it = w.find(key);
                if (it == w.end()) {
                    w[key] = 1.0 / static_cast<double>(items.size());
                } else {
                    const double next = it->second + p.eta * act[items[i]] * act[items[j]] * (1.0 - it->second);
                    it->second = std::min(1.0, next);
                }
            }
        }
        for (auto& [key, value] : w) {
            if (!reinforced.count(key)) {
                value *= 1.0 - p.beta_w;
            }
        }
        for (auto& [item, value] : act) {
            if (!touched.count(item)) {
                value *= 1.0 - p.beta_a;
            }
        }
        std::erase_if(w, [&](const auto& entry) { return entry.second < p.epsilon; });
        std::erase_if(act, [&](const auto& entry) {
            if (entry.second >= p.epsilon) {
                return false;
            }
            for (const auto& [key, value] : w) {
                if (key.first == entry.first || key.second == entry.first) {
                    return false;
                }
            }
            return true;
        });
    }
};

std::vector<std::string> occurrences(const Transaction& txn) {
    std::vector<std::string> out;
    for (const auto& [label, count] : txn.items) {
        out.insert(out.end(), count, label.str());
    }
    return out;
}

void compare_with_reference(Check& c, const MindMap& map, const Reference& ref, const std::string& where) {
    c.expect(map.cells.size() == ref.act.size(), where + ": cell count differs from reference");
    c.expect(map.edges.size() == ref.w.size(), where + ": edge count differs from reference");
    for (const auto& [label, value] : ref.act) {
        const auto got = get_activation(map, ItemLabel(label));
        c.expect(got.has_value(), where + ": missing cell " + label);
        if (got) {
            c.near(*got, value, kExactTol, where + ": activation " + label);
        }
    }
    for (const auto& [key, value] : ref.w) {
        const auto got = get_weight(map, ItemLabel(key.first), ItemLabel(key.second));
        c.expect(got.has_value(), where + ": missing edge " + key.first + key.second);
        if (got) {
            c.near(*got, value, kExactTol, where + ": weight " + key.first + key.second);
        }
    }
}

double weight(const MindMap& map, const char* a, const char* b) {
    return get_weight(map, ItemLabel(a), ItemLabel(b)).value_or(-1.0);
}

std::string transaction_text(const std::vector<Transaction>& txns) {
    std::string text;
    for (std::size_t t = 0; t < txns.size(); ++t) {
        for (const auto& [label, count] : txns[t].items) {
            for (std::size_t k = 0; k < count; ++k) {
                text += format_record(StreamRecord{std::chrono::year{2000} / 1 / 1, t + 1, label}) + "\n";
            }
        }
    }
    return text;
}

EngineState run_engine(const std::vector<Transaction>& txns, const EngineParams& p) {
    Engine engine(p);
    for (const auto& txn : txns) {
        engine.process(txn);
    }
    return engine.state();
}

EngineState run_chunked(const std::string& text, std::size_t chunk, const EngineParams& p) {
    Engine engine(p);
    StreamDriver driver(engine, OnParseError::Stop);
    for (std::size_t i = 0; i < text.size(); i += chunk) {
        driver.feed(std::string_view(text).substr(i, chunk));
    }
    driver.finish();
    return engine.state();
}

// 1. Worked example replay.
void replay(Check& c) {
    const auto start = std::chrono::steady_clock::now();
    const auto txns = worked_example();
    MindMap map = new_mindmap();
    Reference ref;
    for (std::size_t i = 0; i < txns.size(); ++i) {
        apply_transaction(map, txns[i], ref.p);
        ref.step(occurrences(txns[i]));
        compare_with_reference(c, map, ref, "step " + std::to_string(i + 1));
        if (i == 0) {
            c.near(weight(map, "A", "C"), 1.0 / 3.0, kExactTol, "step 1 AC");
            c.near(weight(map, "A", "D"), 1.0 / 3.0, kExactTol, "step 1 AD");
            c.near(weight(map, "C", "D"), 1.0 / 3.0, kExactTol, "step 1 CD");
        }
    }

    const std::set<PairKey> inner{PairKey("B"_item, "C"_item), PairKey("B"_item, "E"_item),
                                  PairKey("C"_item, "E"_item)};
    double low = 1.0;
    double high = 0.0;
    for (const auto& [key, edge] : map.edges) {
        if (inner.count(key)) {
            low = std::min(low, edge.weight);
        } else {
            high = std::max(high, edge.weight);
        }
    }
    c.expect(low > high, "no strict weight gap after step 4");
    const double theta = 0.5 * (low + high);
    const Skeleton skeleton = extract_skeleton(map, theta, 0.0);
    c.expect(skeleton.nodes == std::set<ItemLabel>{"B"_item, "C"_item, "E"_item}, "skeleton nodes are not {B,C,E}");

    std::set<std::pair<std::string, std::string>> rules;
    for (const auto& rule : derive_rules(skeleton)) {
        rules.emplace(rule.antecedent.str(), rule.consequent.str());
    }
    const std::set<std::pair<std::string, std::string>> expected{{"B", "C"}, {"B", "E"}, {"C", "B"},
                                                                 {"C", "E"}, {"E", "B"}, {"E", "C"}};
    c.expect(rules == expected, "rules differ from B=>C, B=>E, C=>B, C=>E, E=>B, E=>C");

    const double elapsed = seconds_since(start);
    c.expect(elapsed < kReplayBudgetSeconds, "replay took " + std::to_string(elapsed) + " s");
    char note[96];
    std::snprintf(note, sizeof note, "gap (%.6f, %.6f), theta_w %.6f, %.3f ms", high, low, theta, elapsed * 1e3);
    c.notes.emplace_back(note);
}

ItemSet set_of(std::initializer_list<const char*> names, std::size_t support) {
    ItemSet s;
    for (const char* name : names) {
        s.items.emplace_back(name);
    }
    s.support = support;
    return s;
}

// 2. Apriori against exhaustive counting.
void apriori_oracle(Check& c) {
    const auto start = std::chrono::steady_clock::now();
    const auto txns = worked_example();
    const auto found = apriori(txns, 2);
    const mindmap::testing::BruteForce oracle(txns);
    c.expect(found == oracle.frequent(2), "worked example: frequent sets differ from brute force");

    // Values quoted for the example. {B,C,E} occurs in transactions 2, 3 and 4.
    const std::vector<ItemSet> quoted{set_of({"A"}, 2),      set_of({"B"}, 3),      set_of({"C"}, 4),
                                      set_of({"E"}, 3),      set_of({"A", "C"}, 2), set_of({"B", "C"}, 3),
                                      set_of({"B", "E"}, 3), set_of({"C", "E"}, 3)};
    for (const auto& want : quoted) {
        c.expect(std::find(found.begin(), found.end(), want) != found.end(), "quoted frequent set missing");
    }
    const auto bce = std::find_if(found.begin(), found.end(), [](const ItemSet& s) { return s.items.size() == 3; });
    c.expect(bce != found.end() && bce->items == std::vector<ItemLabel>{"B"_item, "C"_item, "E"_item},
             "{B,C,E} not frequent");
    if (bce != found.end()) {
        c.notes.push_back("{B,C,E} support " + std::to_string(bce->support) + " (quoted 2)");
    }

    const auto levels = apriori_levels(txns, 2);
    c.expect(levels.size() >= 2, "fewer than two levels");
    if (levels.size() >= 2) {
        const auto border = negative_border(levels[1].candidates, levels[1].frequent);
        std::vector<std::vector<ItemLabel>> got;
        for (const auto& s : border) {
            got.push_back(s.items);
        }
        const std::vector<std::vector<ItemLabel>> want{{"A"_item, "B"_item}, {"A"_item, "E"_item}};
        c.expect(got == want, "negative border at k=2 is not {AB, AE}");
        c.expect(border == oracle.negative_border(2, 2), "negative border differs from brute force");
    }

    std::mt19937_64 rng(20260101);
    std::size_t mismatches = 0;
    for (int db = 0; db < 200; ++db) {
        const std::size_t items = 1 + rng() % 8;
        const std::size_t count = rng() % 31;
        const auto random = mindmap::testing::random_stream(rng, items, count, items + 2);
        const std::size_t minsup = 1 + rng() % 5;
        const mindmap::testing::BruteForce brute(random);
        bool same = apriori(random, minsup) == brute.frequent(minsup);
        const auto lv = apriori_levels(random, minsup);
        for (std::size_t k = 0; k < lv.size(); ++k) {
            same = same && negative_border(lv[k].candidates, lv[k].frequent) == brute.negative_border(k + 1, minsup);
        }
        mismatches += same ? 0 : 1;
    }
    c.expect(mismatches == 0, std::to_string(mismatches) + " random databases mismatch");

    const double elapsed = seconds_since(start);
    c.expect(elapsed < kAprioriBudgetSeconds, "apriori checks took " + std::to_string(elapsed) + " s");
    char note[64];
    std::snprintf(note, sizeof note, "200 random databases, %.3f s", elapsed);
    c.notes.emplace_back(note);
}

// 3. Determinism and chunk independence.
void determinism(Check& c) {
    std::mt19937_64 rng(3);
    const auto txns = mindmap::testing::random_stream(rng, 30, 1000, 6, 1);
    const EngineParams p;
    const std::string first = save_snapshot(run_engine(txns, p));
    c.expect(first == save_snapshot(run_engine(txns, p)), "two runs differ");

    const std::string text = transaction_text(txns);
    for (std::size_t chunk : {text.size(), std::size_t{1}, std::size_t{7}, std::size_t{4096}}) {
        c.expect(save_snapshot(run_chunked(text, chunk, p)) == first,
                 "chunk size " + std::to_string(chunk) + " differs");
    }
    std::istringstream in(text);
    Engine engine(p);
    StreamDriver driver(engine, OnParseError::Stop);
    run_stream(driver, in, 333);
    c.expect(save_snapshot(engine.state()) == first, "istream replay differs");
}

// 4. Capacity bounds.
void capacity(Check& c) {
    std::vector<EngineParams> settings(3);
    settings[0].beta_w = 0.0;
    settings[0].beta_a = 0.0;
    settings[0].epsilon = 0.0;
    settings[2].beta_w = 0.3;
    settings[2].beta_a = 0.3;
    std::mt19937_64 rng(4);
    for (const auto& p : settings) {
        for (int s = 0; s < 5; ++s) {
            MindMap map;
            for (const auto& txn : mindmap::testing::random_stream(rng, 20, 400, 8)) {
                apply_transaction(map, txn, p);
                const std::size_t n = map.cell_count();
                if (n > 20 || map.edge_count() > 190 || map.edge_count() > n * (n - (n > 0 ? 1 : 0)) / 2) {
                    c.expect(false, "bound exceeded at step " + std::to_string(map.step));
                    return;
                }
            }
        }
    }
}

std::set<PairKey> edge_keys(const MindMap& map) {
    std::set<PairKey> keys;
    for (const auto& [key, edge] : map.edges) {
        keys.insert(key);
    }
    return keys;
}

// 5. Order independence of the edge set without decay.
void permutations(Check& c) {
    EngineParams flat;
    flat.beta_w = 0.0;
    flat.beta_a = 0.0;
    const EngineParams decaying;
    std::mt19937_64 rng(5);
    bool weights_differ = false;
    for (int s = 0; s < 50; ++s) {
        auto txns = mindmap::testing::random_stream(rng, 12, 40, 5);
        const std::set<PairKey> base = edge_keys(run_engine(txns, flat).map);
        const MindMap base_decay = run_engine(txns, decaying).map;
        for (int k = 0; k < 10; ++k) {
            std::shuffle(txns.begin(), txns.end(), rng);
            if (edge_keys(run_engine(txns, flat).map) != base) {
                c.expect(false, "stream " + std::to_string(s) + ": edge set depends on order");
            }
            const MindMap other = run_engine(txns, decaying).map;
            weights_differ = weights_differ || other.edges != base_decay.edges;
        }
    }
    c.expect(weights_differ, "decay never made the weights order dependent");
}

// 6. Monotone weights and unit ranges without decay.
void monotone(Check& c) {
    EngineParams p;
    p.beta_w = 0.0;
    p.beta_a = 0.0;
    std::mt19937_64 rng(6);
    MindMap map;
    std::map<PairKey, double> last;
    for (const auto& txn : mindmap::testing::random_stream(rng, 25, 1000, 7)) {
        apply_transaction(map, txn, p);
        for (const auto& [key, edge] : map.edges) {
            if (edge.weight < 0.0 || edge.weight > 1.0) {
                c.expect(false, "weight out of range at step " + std::to_string(map.step));
            }
            auto it = last.find(key);
            if (it != last.end() && edge.weight < it->second) {
                c.expect(false, "weight decreased at step " + std::to_string(map.step));
            }
            last[key] = edge.weight;
        }
        c.expect(last.size() == map.edge_count(), "an edge vanished at step " + std::to_string(map.step));
        for (const auto& [label, cell] : map.cells) {
            if (cell.activation < 0.0 || cell.activation > 1.0) {
                c.expect(false, "activation out of range at step " + std::to_string(map.step));
            }
        }
        if (!c.failures.empty()) {
            return;
        }
    }
}

const LtmRecord* find_record(const LongTermMemory& ltm, const Signature& sig) {
    for (const auto& r : ltm) {
        if (r.signature == sig) {
            return &r;
        }
    }
    return nullptr;
}

// 7. Promotion, closure and recurrence of [B,C,E].
void lifecycle(Check& c) {
    const auto txns = worked_example();
    const MindMap probe = run_engine(txns, EngineParams{}).map;
    const double low = std::min({weight(probe, "B", "C"), weight(probe, "B", "E"), weight(probe, "C", "E")});
    const double high = std::max({weight(probe, "A", "C"), weight(probe, "A", "D"), weight(probe, "C", "D"),
                                  weight(probe, "A", "B"), weight(probe, "A", "E")});

    EngineParams p;
    p.promote_after = 2;
    p.theta_w = 0.5 * (low + high);
    Engine engine(p);
    std::vector<std::string> events;
    engine.set_event_sink([&](const std::string& line) { events.push_back(line); });
    for (const auto& txn : txns) {
        engine.process(txn);
    }
    const Signature bce{"B"_item, "C"_item, "E"_item};
    c.expect(engine.state().stm.count(bce) == 1, "[B,C,E] not in short-term memory after step 4");

    Step opened = 0;
    for (int i = 0; i < 200; ++i) {
        engine.process(Transaction{});
        const LtmRecord* r = find_record(engine.state().ltm, bce);
        if (r && r->open() && opened == 0) {
            opened = engine.step();
        }
    }
    c.expect(opened != 0, "[B,C,E] never acquired an open record");
    const LtmRecord* closed = find_record(engine.state().ltm, bce);
    c.expect(closed && !closed->open(), "record still open after 200 empty transactions");
    if (closed && closed->disappeared_at) {
        c.expect(closed->appeared_at <= *closed->disappeared_at, "appeared_at > disappeared_at");
        c.notes.push_back("open at step " + std::to_string(closed->appeared_at) + ", closed at step " +
                          std::to_string(*closed->disappeared_at));
    }

    for (int i = 0; i < 10; ++i) {
        engine.process(make_transaction({"B", "C", "E"}));
    }
    const LtmRecord* again = find_record(engine.state().ltm, bce);
    c.expect(again && again->open() && again->recurrence_count == 2, "record not reopened with recurrence 2");
    c.expect(engine.state().ltm.size() == 1, "more than one record for [B,C,E]");
    c.expect(std::find(events.begin(), events.end(), std::to_string(opened) + " pattern-promoted B|C|E") !=
                 events.end(),
             "promotion event missing");
}

// 8. Forgetting an item seen once.
void forgetting(Check& c) {
    std::mt19937_64 rng(8);
    auto txns = mindmap::testing::random_stream(rng, 10, 500, 4);
    for (auto& txn : txns) {
        txn.items[ItemLabel("steady one")] += 1;
        txn.items[ItemLabel("steady two")] += 1;
    }
    txns.front().items[ItemLabel("once")] = 1;
    const EngineState state = run_engine(txns, EngineParams{});
    c.expect(!state.map.cells.contains(ItemLabel("once")), "item seen once is still present");
    c.expect(save_snapshot(state).find("once") == std::string::npos, "item seen once is in the snapshot");
    c.expect(state.map.cells.contains(ItemLabel("steady one")) && state.map.cells.contains(ItemLabel("steady two")),
             "recurring item was forgotten");
    c.expect(get_weight(state.map, ItemLabel("steady one"), ItemLabel("steady two")).has_value(),
             "recurring edge was forgotten");
}

// 9. Snapshot round trip.
void round_trip(Check& c) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
        const EngineState state = mindmap::testing::random_engine_state(rng);
        const std::string text = save_snapshot(state);
        const EngineState loaded = load_snapshot(text);
        c.expect(save_snapshot(loaded) == text, "state " + std::to_string(i) + ": bytes differ");
        c.expect(loaded == state, "state " + std::to_string(i) + ": values differ");
    }
}

}// namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria{
        {"worked example replay", replay},
        {"apriori matches brute force", apriori_oracle},
        {"deterministic replay", determinism},
        {"capacity bounds", capacity},
        {"edge set order independence", permutations},
        {"monotone weights without decay", monotone},
        {"memory lifecycle", lifecycle},
        {"forgetting", forgetting},
        {"snapshot round trip", round_trip},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        const bool ok = c.failures.empty();
        failed += ok ? 0 : 1;
        std::string detail;
        for (const auto& text : ok ? c.notes : c.failures) {
            detail += (detail.empty() ? " (" : "; ") + text;
        }
        if (!detail.empty()) {
            detail += ")";
        }
        std::printf("[%s] %zu %s%s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first, detail.c_str());
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
