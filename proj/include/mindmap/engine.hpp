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

#include <mindmap/dynamics.hpp>
#include <mindmap/memory.hpp>
#include <mindmap/skeleton.hpp>
#include <mindmap/snapshot.hpp>
#include <mindmap/stream.hpp>
#include <mindmap/types.hpp>

#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mindmap {

/// A query evaluated against the state after every synchronization step
/// that follows its registration.
struct ContinuousQuery {
    enum class Kind { TraceEdge, StrongestSubgraphs };

    Kind kind = Kind::TraceEdge;
    std::optional<PairKey> target;   // TraceEdge only
    std::size_t horizon = 1;         // TraceEdge: number of steps to report
    Step registered_at = 0;          // stamped by Engine::register_query
    double theta_w = 0.5;            // StrongestSubgraphs only
    std::size_t top_k = 1;           // StrongestSubgraphs only

    static ContinuousQuery trace(PairKey pair, std::size_t steps);
    static ContinuousQuery strongest(double theta_w, std::size_t top_k);
};

/// Owns the mutable state and drives one synchronization step per
/// transaction: dynamics, then the memory layers, then continuous queries.
///
/// Event lines have the form `<step> <kind> <details>`; continuous query
/// answers go to a separate sink. Both sinks are optional.
class Engine {
  public:
    using Sink = std::function<void(const std::string&)>;

    /// Throws Error if the parameters are out of range.
    explicit Engine(EngineParams params = {});
    explicit Engine(EngineState state);

    const EngineState& state() const noexcept { return state_; }
    const MindMap& map() const noexcept { return state_.map; }
    const EngineParams& params() const noexcept { return state_.params; }
    Step step() const noexcept { return state_.map.step; }

    void set_event_sink(Sink sink) { events_ = std::move(sink); }
    void set_query_sink(Sink sink) { answers_ = std::move(sink); }

    /// Emits a `summary` event every n steps; 0 disables it.
    void set_summary_every(std::size_t n) noexcept { summary_every_ = n; }

    /// Throws Error when the horizon or top_k is zero.
    void register_query(ContinuousQuery query);
    std::size_t active_queries() const noexcept { return queries_.size(); }

    StepEvents process(const Transaction& txn);

    /// Writes `<current step> <kind> <details>` to the event sink.
    void report(std::string_view kind, std::string_view details) const;

  private:
    struct ActiveQuery {
        ContinuousQuery query;
        std::size_t remaining;
    };

    void report_step(const StepEvents& events, const std::vector<LtmChange>& changes) const;
    void evaluate_queries();
    void emit_answer(const std::string& line) const;

    EngineState state_;
    std::vector<ActiveQuery> queries_;
    Sink events_;
    Sink answers_;
    std::size_t summary_every_ = 0;
};

enum class OnParseError { Stop, Skip };

/// A continuous query to register once the engine has reached `at` steps.
struct ScheduledQuery {
    Step at = 0;
    ContinuousQuery query;
};

/// Parses one query-file line:
///   at <step> trace <labelA> <labelB> <k>
///   at <step> strongest <theta_w> <top_k>
/// Returns nullopt for blank and `#` lines; throws Error otherwise on bad
/// syntax.
std::optional<ScheduledQuery> parse_query_command(std::string_view line);

std::vector<ScheduledQuery> parse_query_file(std::istream& in);

/// Feeds raw stream text to an engine. Chunk boundaries do not affect the
/// result.
class StreamDriver {
  public:
    StreamDriver(Engine& engine, OnParseError policy);

    void schedule(ScheduledQuery query);

    /// Throws ParseError on a malformed line when the policy is Stop.
    void feed(std::string_view chunk);

    /// Flushes the last transaction.
    void finish();

    std::size_t skipped_lines() const noexcept { return skipped_; }
    std::size_t transactions() const noexcept { return delivered_; }

  private:
    void handle(std::vector<ParsedLine> lines);
    void deliver(Transaction txn);
    void register_due();

    Engine& engine_;
    OnParseError policy_;
    RecordReader reader_;
    TransactionGrouper grouper_;
    std::set<std::pair<long long, std::uint64_t>> seen_tids_;
    std::multimap<Step, ContinuousQuery> pending_;
    std::size_t skipped_ = 0;
    std::size_t delivered_ = 0;
};

/// Reads `in` to the end in fixed-size chunks through a StreamDriver.
void run_stream(StreamDriver& driver, std::istream& in, std::size_t chunk_size = 1 << 16);

}// namespace mindmap
