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

#include <mindmap/engine.hpp>

#include <charconv>
#include <cstdio>

namespace mindmap {

namespace {

std::string pair_text(const PairKey& key) {
    return quote_token(key.first().str()) + " " + quote_token(key.second().str());
}

std::uint64_t to_integer(const std::string& text, const char* what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(std::string("bad ") + what + " '" + text + "'");
    }
    return value;
}

double to_real(const std::string& text, const char* what) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(std::string("bad ") + what + " '" + text + "'");
    }
    return value;
}

}// namespace

ContinuousQuery ContinuousQuery::trace(PairKey pair, std::size_t steps) {
    ContinuousQuery q;
    q.kind = Kind::TraceEdge;
    q.target = std::move(pair);
    q.horizon = steps;
    return q;
}

ContinuousQuery ContinuousQuery::strongest(double theta_w, std::size_t top_k) {
    ContinuousQuery q;
    q.kind = Kind::StrongestSubgraphs;
    q.theta_w = theta_w;
    q.top_k = top_k;
    return q;
}

Engine::Engine(EngineParams params) {
    params.validate();
    state_.params = params;
}

Engine::Engine(EngineState state) : state_(std::move(state)) { state_.params.validate(); }

void Engine::register_query(ContinuousQuery query) {
    if (query.kind == ContinuousQuery::Kind::TraceEdge) {
        if (!query.target) {
            throw Error("trace query needs a target pair");
        }
        if (query.horizon == 0) {
            throw Error("trace horizon must be at least 1");
        }
    } else if (query.top_k == 0) {
        throw Error("top_k must be at least 1");
    }
    query.registered_at = step();
    const std::size_t remaining = query.kind == ContinuousQuery::Kind::TraceEdge ? query.horizon : 1;
    queries_.push_back({std::move(query), remaining});
}

StepEvents Engine::process(const Transaction& txn) {
    StepEvents events = apply_transaction(state_.map, txn, state_.params);

    const Step now = state_.map.step;
    const Skeleton skeleton = extract_skeleton(state_.map, state_.params.theta_w, state_.params.theta_a);
    const std::vector<Pattern> current = detect_patterns(skeleton);
    StmTick tick = stm_tick(state_.stm, current, now, state_.params.promote_after);
    LtmUpdate update = ltm_update(state_.ltm, tick.promotions, current, now);
    state_.stm = std::move(tick.stm);
    state_.ltm = std::move(update.ltm);

    report_step(events, update.changes);
    evaluate_queries();
    return events;
}

void Engine::report(std::string_view kind, std::string_view details) const {
    if (!events_) {
        return;
    }
    std::string line = std::to_string(step()) + " " + std::string(kind);
    if (!details.empty()) {
        line += " ";
        line += details;
    }
    events_(line);
}

void Engine::report_step(const StepEvents& events, const std::vector<LtmChange>& changes) const {
    if (!events_) {
        return;
    }
    for (const auto& label : events.cells_created) {
        report("cell-created", quote_token(label.str()));
    }
    for (const auto& key : events.edges_created) {
        report("edge-created", pair_text(key) + " " + format_number(state_.map.edges.at(key).weight));
    }
    for (const auto& key : events.edges_forgotten) {
        report("edge-forgotten", pair_text(key));
    }
    for (const auto& label : events.cells_forgotten) {
        report("cell-forgotten", quote_token(label.str()));
    }
    for (const auto& change : changes) {
        const std::string sig = quote_token(signature_string(change.signature));
        switch (change.kind) {
            case LtmChange::Kind::Opened: report("pattern-promoted", sig); break;
            case LtmChange::Kind::Reopened:
                report("pattern-recurred", sig + " " + std::to_string(change.recurrence_count));
                break;
            case LtmChange::Kind::Closed: report("pattern-closed", sig); break;
        }
    }
    if (summary_every_ > 0 && step() % summary_every_ == 0) {
        std::size_t open = 0;
        for (const auto& record : state_.ltm) {
            open += record.open() ? 1 : 0;
        }
        report("summary", "cells=" + std::to_string(state_.map.cell_count()) +
                              " edges=" + std::to_string(state_.map.edge_count()) +
                              " stm=" + std::to_string(state_.stm.size()) + " ltm-open=" + std::to_string(open));
    }
}

void Engine::emit_answer(const std::string& line) const {
    if (answers_) {
        answers_(line);
    }
}

void Engine::evaluate_queries() {
    const std::string now = std::to_string(step());
    for (auto& active : queries_) {
        const ContinuousQuery& q = active.query;
        if (q.kind == ContinuousQuery::Kind::TraceEdge) {
            const auto weight = get_weight(state_.map, q.target->first(), q.target->second());
            emit_answer("trace " + pair_text(*q.target) + " " + now + " " +
                        (weight ? format_number(*weight) : std::string("absent")));
        } else {
            const auto ranked = strongest_subgraphs(state_.map, q.theta_w, q.top_k);
            if (ranked.empty()) {
                emit_answer("strongest " + now + " none");
            }
            for (std::size_t rank = 0; rank < ranked.size(); ++rank) {
                const auto& component = ranked[rank];
                emit_answer("strongest " + now + " " + std::to_string(rank + 1) + " " +
                            quote_token(signature_string({component.nodes.begin(), component.nodes.end()})) + " " +
                            format_number(component.mean_weight()));
            }
        }
        --active.remaining;
    }
    std::erase_if(queries_, [](const ActiveQuery& a) { return a.remaining == 0; });
}

std::optional<ScheduledQuery> parse_query_command(std::string_view line) {
    const std::vector<std::string> tok = tokenize(line);
    if (tok.empty() || tok.front().starts_with('#')) {
        return std::nullopt;
    }
    if (tok.size() < 3 || tok[0] != "at") {
        throw Error("query command must start with 'at <step>'");
    }
    ScheduledQuery scheduled;
    scheduled.at = to_integer(tok[1], "step");
    if (tok[2] == "trace") {
        if (tok.size() != 6) {
            throw Error("usage: at <step> trace <labelA> <labelB> <k>");
        }
        scheduled.query = ContinuousQuery::trace(PairKey(ItemLabel(tok[3]), ItemLabel(tok[4])),
                                                 to_integer(tok[5], "horizon"));
        if (scheduled.query.horizon == 0) {
            throw Error("trace horizon must be at least 1");
        }
    } else if (tok[2] == "strongest") {
        if (tok.size() != 5) {
            throw Error("usage: at <step> strongest <theta_w> <top_k>");
        }
        scheduled.query = ContinuousQuery::strongest(to_real(tok[3], "theta_w"), to_integer(tok[4], "top_k"));
        if (scheduled.query.top_k == 0) {
            throw Error("top_k must be at least 1");
        }
    } else {
        throw Error("unknown continuous query '" + tok[2] + "'");
    }
    return scheduled;
}

std::vector<ScheduledQuery> parse_query_file(std::istream& in) {
    std::vector<ScheduledQuery> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        try {
            if (auto q = parse_query_command(line)) {
                out.push_back(std::move(*q));
            }
        } catch (const Error& e) {
            throw Error("query file line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

StreamDriver::StreamDriver(Engine& engine, OnParseError policy) : engine_(engine), policy_(policy) {}

void StreamDriver::schedule(ScheduledQuery query) { pending_.emplace(query.at, std::move(query.query)); }

void StreamDriver::feed(std::string_view chunk) { handle(reader_.feed(chunk)); }

void StreamDriver::finish() {
    handle(reader_.finish());
    if (auto txn = grouper_.finish()) {
        deliver(std::move(*txn));
    }
    register_due();
}

void StreamDriver::handle(std::vector<ParsedLine> lines) {
    for (auto& line : lines) {
        if (!line.record) {
            if (policy_ == OnParseError::Stop) {
                throw ParseError(line.line_no, line.error);
            }
            ++skipped_;
            engine_.report("parse-skip", "line " + std::to_string(line.line_no) + ": " + line.error);
            continue;
        }
        if (auto txn = grouper_.push(*line.record)) {
            deliver(std::move(*txn));
        }
    }
}

void StreamDriver::deliver(Transaction txn) {
    register_due();
    const auto key = std::make_pair(
        static_cast<long long>(std::chrono::sys_days(txn.tid.date).time_since_epoch().count()), txn.tid.ref);
    if (!seen_tids_.insert(key).second) {
        engine_.report("tid-repeat", format_tid(txn.tid));
    }
    engine_.process(txn);
    ++delivered_;
}

void StreamDriver::register_due() {
    while (!pending_.empty() && pending_.begin()->first <= engine_.step()) {
        engine_.register_query(std::move(pending_.begin()->second));
        pending_.erase(pending_.begin());
    }
}

void run_stream(StreamDriver& driver, std::istream& in, std::size_t chunk_size) {
    std::string buffer(chunk_size, '\0');
    while (in) {
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        const auto got = static_cast<std::size_t>(in.gcount());
        if (got == 0) {
            break;
        }
        driver.feed(std::string_view(buffer.data(), got));
    }
    driver.finish();
}

}// namespace mindmap
