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

#include <mindmap/skeleton.hpp>
#include <mindmap/types.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mindmap {

/// Sorted, duplicate-free node labels identifying a pattern.
using Signature = std::vector<ItemLabel>;

/// Pipe-joined form, e.g. "B|C|E". A '|' or '\' inside a label is
/// backslash-escaped so the form stays reversible.
std::string signature_string(const Signature& signature);

/// Inverse of signature_string. The result is sorted and de-duplicated.
/// Throws Error on an empty label or a dangling escape.
Signature parse_signature(std::string_view text);

/// A connected component of the skeleton with at least two cells.
struct Pattern {
    Signature signature;
    std::map<PairKey, double> edges;

    bool operator==(const Pattern&) const = default;
};

std::vector<Pattern> detect_patterns(const Skeleton& skeleton);

/// Survival tracking for a currently visible pattern.
struct StmEntry {
    Signature signature;
    Step first_seen_step = 0;
    std::size_t consecutive_steps = 1;

    bool operator==(const StmEntry&) const = default;
};

using ShortTermMemory = std::map<Signature, StmEntry>;

struct StmTick {
    ShortTermMemory stm;
    std::vector<Pattern> promotions;
};

/// Carries over entries still present in `current`, drops the rest and
/// admits new patterns with a count of one. A pattern is promoted on the tick
/// its count reaches exactly promote_after.
StmTick stm_tick(const ShortTermMemory& stm, const std::vector<Pattern>& current, Step step,
                 std::size_t promote_after);

struct LtmRecord {
    Signature signature;
    Step appeared_at = 0;
    std::optional<Step> disappeared_at;
    std::size_t recurrence_count = 1;

    bool open() const noexcept { return !disappeared_at.has_value(); }

    bool operator==(const LtmRecord&) const = default;
};

/// Kept in canonical order: appeared_at, then signature.
using LongTermMemory = std::vector<LtmRecord>;

struct LtmChange {
    enum class Kind { Opened, Reopened, Closed };

    Kind kind;
    Signature signature;
    Step step = 0;
    std::size_t recurrence_count = 1;
};

struct LtmUpdate {
    LongTermMemory ltm;
    std::vector<LtmChange> changes;
};

/// Closes open records whose pattern is no longer current, then files
/// promotions: a new record, or a reopened closed record with its recurrence
/// count bumped.
LtmUpdate ltm_update(const LongTermMemory& ltm, const std::vector<Pattern>& promotions,
                     const std::vector<Pattern>& current, Step step);

struct LtmFilter {
    enum class Kind { All, Open, Closed, BySignature };

    Kind kind = Kind::All;
    Signature signature;

    static LtmFilter all() { return {Kind::All, {}}; }
    static LtmFilter open() { return {Kind::Open, {}}; }
    static LtmFilter closed() { return {Kind::Closed, {}}; }
    static LtmFilter by_signature(Signature sig) { return {Kind::BySignature, std::move(sig)}; }
};

std::vector<LtmRecord> query_ltm(const LongTermMemory& ltm, const LtmFilter& filter);

}// namespace mindmap
