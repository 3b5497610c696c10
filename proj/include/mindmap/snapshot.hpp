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

#include <mindmap/memory.hpp>
#include <mindmap/types.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mindmap {

/// Everything needed to resume an engine: graph, parameters and both
/// memory layers.
struct EngineState {
    MindMap map;
    EngineParams params;
    ShortTermMemory stm;
    LongTermMemory ltm;

    bool operator==(const EngineState&) const = default;
};

class SnapshotError : public Error {
  public:
    SnapshotError(std::size_t line, const std::string& message);

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

inline constexpr std::string_view kSnapshotHeader = "MINDMAP v1";

/// Canonical text form:
///
///   MINDMAP v1
///   step <n>
///   param <name> <value>                                  (fixed order)
///   cell <label> <activation> <created_at> <last_activated_at>
///   edge <a> <b> <weight> <last_reinforced_at>            (a < b)
///   ltm <signature> <appeared_at> <disappeared_at|open> <recurrence>
///   stm <signature> <first_seen_step> <consecutive_steps>
///
/// Cells and edges are sorted by label, LTM lines by (appeared_at,
/// signature) and STM lines by signature. Reals use the shortest decimal
/// that round-trips. Tokens containing blanks, '"' or '\' are quoted.
std::string save_snapshot(const EngineState& state);

/// Parses and validates a snapshot. Throws SnapshotError with the offending
/// line number ("missing header" for empty input).
EngineState load_snapshot(std::string_view text);

void save_snapshot_file(const EngineState& state, const std::filesystem::path& path);
EngineState load_snapshot_file(const std::filesystem::path& path);

/// Shortest round-trip decimal representation.
std::string format_number(double value);

/// Quotes `text` when it would not survive whitespace tokenizing.
std::string quote_token(std::string_view text);

/// Splits a line on blanks, honouring quoted tokens. Throws Error on an
/// unterminated quote.
std::vector<std::string> tokenize(std::string_view line);

}// namespace mindmap
