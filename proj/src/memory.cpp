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

#include <mindmap/memory.hpp>

#include <algorithm>
#include <set>

namespace mindmap {

namespace {

void sort_canonical(LongTermMemory& ltm) {
    std::sort(ltm.begin(), ltm.end(), [](const LtmRecord& a, const LtmRecord& b) {
        if (a.appeared_at != b.appeared_at) {
            return a.appeared_at < b.appeared_at;
        }
        return a.signature < b.signature;
    });
}

}// namespace

std::string signature_string(const Signature& signature) {
    std::string out;
    for (std::size_t i = 0; i < signature.size(); ++i) {
        if (i > 0) {
            out += '|';
        }
        for (char c : signature[i].str()) {
            if (c == '|' || c == '\\') {
                out += '\\';
            }
            out += c;
        }
    }
    return out;
}

Signature parse_signature(std::string_view text) {
    std::vector<std::string> parts(1);
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\\') {
            if (i + 1 == text.size()) {
                throw Error("dangling escape in signature");
            }
            parts.back() += text[++i];
        } else if (c == '|') {
            parts.emplace_back();
        } else {
            parts.back() += c;
        }
    }
    std::set<ItemLabel> labels;
    for (auto& part : parts) {
        labels.insert(ItemLabel(std::move(part)));
    }
    return {labels.begin(), labels.end()};
}

std::vector<Pattern> detect_patterns(const Skeleton& skeleton) {
    std::vector<Pattern> patterns;
    for (auto& component : connected_components(skeleton)) {
        if (component.nodes.size() < 2) {
            continue;
        }
        patterns.push_back({Signature(component.nodes.begin(), component.nodes.end()), std::move(component.edges)});
    }
    return patterns;
}

StmTick stm_tick(const ShortTermMemory& stm, const std::vector<Pattern>& current, Step step,
                 std::size_t promote_after) {
    if (promote_after == 0) {
        throw Error("promote_after must be at least 1");
    }
    StmTick tick;
    for (const auto& pattern : current) {
        StmEntry entry{pattern.signature, step, 1};
        if (auto it = stm.find(pattern.signature); it != stm.end()) {
            entry = it->second;
            ++entry.consecutive_steps;
        }
        if (entry.consecutive_steps == promote_after) {
            tick.promotions.push_back(pattern);
        }
        tick.stm.insert_or_assign(pattern.signature, std::move(entry));
    }
    return tick;
}

LtmUpdate ltm_update(const LongTermMemory& ltm, const std::vector<Pattern>& promotions,
                     const std::vector<Pattern>& current, Step step) {
    LtmUpdate update{ltm, {}};

    std::set<Signature> present;
    for (const auto& pattern : current) {
        present.insert(pattern.signature);
    }
    for (auto& record : update.ltm) {
        if (record.open() && !present.contains(record.signature)) {
            record.disappeared_at = step;
            update.changes.push_back({LtmChange::Kind::Closed, record.signature, step, record.recurrence_count});
        }
    }

    for (const auto& pattern : promotions) {
        auto it = std::find_if(update.ltm.begin(), update.ltm.end(),
                               [&](const LtmRecord& r) { return r.signature == pattern.signature; });
        if (it == update.ltm.end()) {
            update.ltm.push_back({pattern.signature, step, std::nullopt, 1});
            update.changes.push_back({LtmChange::Kind::Opened, pattern.signature, step, 1});
        } else if (!it->open()) {
            it->appeared_at = step;
            it->disappeared_at.reset();
            ++it->recurrence_count;
            update.changes.push_back({LtmChange::Kind::Reopened, pattern.signature, step, it->recurrence_count});
        }
    }

    sort_canonical(update.ltm);
    return update;
}

std::vector<LtmRecord> query_ltm(const LongTermMemory& ltm, const LtmFilter& filter) {
    std::vector<LtmRecord> out;
    for (const auto& record : ltm) {
        bool keep = false;
        switch (filter.kind) {
            case LtmFilter::Kind::All: keep = true; break;
            case LtmFilter::Kind::Open: keep = record.open(); break;
            case LtmFilter::Kind::Closed: keep = !record.open(); break;
            case LtmFilter::Kind::BySignature: keep = record.signature == filter.signature; break;
        }
        if (keep) {
            out.push_back(record);
        }
    }
    return out;
}

}// namespace mindmap
