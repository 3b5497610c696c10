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
#include <mindmap/engine.hpp>
#include <mindmap/query.hpp>
#include <mindmap/snapshot.hpp>
#include <mindmap/stream.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

using namespace mindmap;

namespace {

constexpr int kExitError = 2;

/// Output destination; "-" is stdout.
class Output {
  public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) {
                throw Error("cannot open " + path + " for writing");
            }
        }
    }

    std::ostream& stream() { return file_ ? *file_ : std::cout; }

    void line(const std::string& text) { stream() << text << '\n'; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

class Input {
  public:
    explicit Input(const std::string& path) {
        if (path != "-") {
            file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
            if (!*file_) {
                throw Error("cannot open " + path);
            }
        }
    }

    std::istream& stream() { return file_ ? *file_ : std::cin; }

  private:
    std::unique_ptr<std::ifstream> file_;
};

struct ParamFlags {
    EngineParams params;
    std::vector<CLI::Option*> options;

    void add(CLI::App& app) {
        options = {
            app.add_option("--eta", params.eta, "Hebbian learning rate")->capture_default_str(),
            app.add_option("--lambda", params.lambda, "activation gain per occurrence")->capture_default_str(),
            app.add_option("--beta-w", params.beta_w, "edge decay per idle step")->capture_default_str(),
            app.add_option("--beta-a", params.beta_a, "activation decay per idle step")->capture_default_str(),
            app.add_option("--epsilon", params.epsilon, "forgetting floor")->capture_default_str(),
            app.add_option("--theta-w", params.theta_w, "skeleton weight threshold")->capture_default_str(),
            app.add_option("--theta-a", params.theta_a, "skeleton activation threshold")->capture_default_str(),
            app.add_option("--promote-after", params.promote_after, "steps before a pattern is promoted")
                ->capture_default_str(),
        };
    }

    bool any_given() const {
        for (const auto* opt : options) {
            if (opt->count() > 0) {
                return true;
            }
        }
        return false;
    }
};

struct StreamFlags {
    std::string input = "-";
    std::string snapshot = "-";
    std::string events;
    std::string answers = "-";
    std::string queries;
    std::string resume;
    std::string on_error = "stop";
    std::size_t summary_every = 0;
    std::vector<std::string> trace;
    std::vector<std::string> strongest;
    ParamFlags params;
};

void add_stream_flags(CLI::App& app, StreamFlags& f, bool resumable) {
    app.add_option("--input", f.input, "record file, - for stdin")->capture_default_str();
    app.add_option("--snapshot", f.snapshot, "final snapshot destination, - for stdout")->capture_default_str();
    app.add_option("--events", f.events, "event log destination, - for stdout");
    app.add_option("--answers", f.answers, "continuous query answers, - for stdout")->capture_default_str();
    app.add_option("--queries", f.queries, "file of 'at <step> ...' query commands")->check(CLI::ExistingFile);
    app.add_option("--trace", f.trace, "trace the edge A-B for K steps from the start")->expected(3)->type_name(
        "A B K");
    app.add_option("--strongest", f.strongest, "strongest subgraphs after the first step")->expected(2)->type_name(
        "THETA K");
    app.add_option("--on-parse-error", f.on_error, "stop or skip")
        ->check(CLI::IsMember({"stop", "skip"}))
        ->capture_default_str();
    app.add_option("--summary-every", f.summary_every, "emit a summary event every N steps");
    f.params.add(app);
    if (resumable) {
        app.add_option("--resume", f.resume, "continue from a saved snapshot")->check(CLI::ExistingFile);
    }
}

ScheduledQuery inline_query(const std::string& command) {
    auto parsed = parse_query_command(command);
    if (!parsed) {
        throw Error("empty query");
    }
    return *parsed;
}

int run_stream_command(const StreamFlags& f) {
    std::optional<Engine> engine;
    if (!f.resume.empty()) {
        if (f.params.any_given()) {
            throw Error("parameters come from the resumed snapshot and cannot be overridden");
        }
        engine.emplace(load_snapshot_file(f.resume));
    } else {
        engine.emplace(f.params.params);
    }

    std::optional<Output> events;
    if (!f.events.empty()) {
        events.emplace(f.events);
        engine->set_event_sink([&events](const std::string& line) { events->line(line); });
    } else {
        engine->set_event_sink([](const std::string& line) {
            if (line.find(" parse-skip ") != std::string::npos) {
                std::cerr << "warning: " << line << '\n';
            }
        });
    }
    Output answers(f.answers);
    engine->set_query_sink([&answers](const std::string& line) { answers.line(line); });
    engine->set_summary_every(f.summary_every);

    StreamDriver driver(*engine, f.on_error == "skip" ? OnParseError::Skip : OnParseError::Stop);
    if (!f.queries.empty()) {
        std::ifstream file(f.queries);
        for (auto& q : parse_query_file(file)) {
            driver.schedule(std::move(q));
        }
    }
    const std::string at = "at " + std::to_string(engine->step()) + " ";
    if (!f.trace.empty()) {
        driver.schedule(inline_query(at + "trace " + quote_token(f.trace[0]) + " " + quote_token(f.trace[1]) + " " +
                                     f.trace[2]));
    }
    if (!f.strongest.empty()) {
        driver.schedule(inline_query(at + "strongest " + f.strongest[0] + " " + f.strongest[1]));
    }

    Input input(f.input);
    run_stream(driver, input.stream());
    answers.stream().flush();

    const std::string text = save_snapshot(engine->state());
    if (f.snapshot == "-") {
        std::cout << text << std::flush;
    } else {
        save_snapshot_file(engine->state(), f.snapshot);
    }
    if (driver.skipped_lines() > 0) {
        std::cerr << "skipped " << driver.skipped_lines() << " malformed line(s)\n";
    }
    return 0;
}

std::vector<Transaction> read_transactions(const std::string& path, bool skip) {
    Input input(path);
    RecordReader reader;
    std::vector<StreamRecord> records;
    auto take = [&](std::vector<ParsedLine> lines) {
        for (auto& line : lines) {
            if (line.record) {
                records.push_back(std::move(*line.record));
            } else if (skip) {
                std::cerr << "warning: line " << line.line_no << ": " << line.error << '\n';
            } else {
                throw ParseError(line.line_no, line.error);
            }
        }
    };
    std::string chunk(1 << 16, '\0');
    while (input.stream()) {
        input.stream().read(chunk.data(), static_cast<std::streamsize>(chunk.size()));
        take(reader.feed(std::string_view(chunk.data(), static_cast<std::size_t>(input.stream().gcount()))));
    }
    take(reader.finish());
    return group_transactions(records);
}

std::string braces(const ItemSet& set) {
    std::string out = "{";
    for (std::size_t i = 0; i < set.items.size(); ++i) {
        out += (i ? "," : "") + quote_token(set.items[i].str());
    }
    return out + "}";
}

std::size_t absolute_support(const std::string& text, std::size_t transactions) {
    double value = 0.0;
    try {
        std::size_t used = 0;
        value = std::stod(text, &used);
        if (used != text.size()) {
            throw Error("");
        }
    } catch (const std::exception&) {
        throw Error("bad --minsup '" + text + "'");
    }
    if (text.find_first_of(".eE") == std::string::npos) {
        if (value < 1.0) {
            throw Error("--minsup must be at least 1");
        }
        return static_cast<std::size_t>(value);
    }
    if (!(value > 0.0 && value <= 1.0)) {
        throw Error("relative --minsup must lie in (0, 1]");
    }
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(value * static_cast<double>(transactions))));
}

int apriori_command(const std::string& input, const std::string& minsup_text, double minconf, bool skip) {
    const auto txns = read_transactions(input, skip);
    const std::size_t minsup = absolute_support(minsup_text, txns.size());
    const auto levels = apriori_levels(txns, minsup);
    std::cout << "transactions " << txns.size() << " minsup " << minsup << '\n';
    std::vector<ItemSet> frequent;
    for (const auto& level : levels) {
        for (const auto& set : level.frequent) {
            std::cout << "frequent " << braces(set) << ' ' << set.support << '\n';
            frequent.push_back(set);
        }
    }
    for (const auto& level : levels) {
        for (const auto& set : negative_border(level.candidates, level.frequent)) {
            std::cout << "border " << level.candidates.level << ' ' << braces(set) << ' ' << set.support << '\n';
        }
    }
    for (const auto& rule : gen_rules(frequent, minconf)) {
        char confidence[32];
        std::snprintf(confidence, sizeof confidence, "%.6f", rule.confidence);
        std::cout << "rule " << braces(rule.antecedent) << " => " << braces(rule.consequent) << ' ' << rule.support
                  << ' ' << confidence << '\n';
    }
    return 0;
}

}// namespace

int main(int argc, char** argv) {
    CLI::App app{"Incremental co-occurrence mind-map over transaction streams", "mindmap"};
    app.require_subcommand(1);

    StreamFlags run_flags;
    auto* run = app.add_subcommand("run", "ingest a record stream and write the final snapshot");
    add_stream_flags(*run, run_flags, false);

    StreamFlags replay_flags;
    auto* replay = app.add_subcommand("replay", "replay a record file, optionally resuming a snapshot");
    add_stream_flags(*replay, replay_flags, true);

    std::string query_snapshot;
    auto* query = app.add_subcommand("query", "answer a static query against a snapshot");
    query->add_option("--snapshot", query_snapshot, "snapshot file")->required()->check(CLI::ExistingFile);
    query->prefix_command();
    query->allow_extras();
    query->footer("The query follows the options, e.g.: query --snapshot s.txt weight A B");

    StreamFlags trace_flags;
    std::vector<std::string> trace_pair;
    std::size_t trace_steps = 1;
    Step trace_at = 0;
    auto* trace = app.add_subcommand("trace", "report the weight of one edge over consecutive steps");
    trace->add_option("--input", trace_flags.input, "record file, - for stdin")->capture_default_str();
    trace->add_option("--pair", trace_pair, "edge endpoints")->expected(2)->required();
    trace->add_option("--steps", trace_steps, "number of steps to report")->capture_default_str();
    trace->add_option("--at", trace_at, "register after this step")->capture_default_str();
    trace->add_option("--on-parse-error", trace_flags.on_error, "stop or skip")
        ->check(CLI::IsMember({"stop", "skip"}));
    trace_flags.params.add(*trace);

    std::string apriori_input = "-";
    std::string apriori_minsup = "2";
    double apriori_minconf = 0.0;
    std::string apriori_on_error = "stop";
    auto* apriori = app.add_subcommand("apriori", "levelwise frequent itemsets, negative borders and rules");
    apriori->add_option("--input", apriori_input, "record file, - for stdin")->capture_default_str();
    apriori->add_option("--minsup", apriori_minsup, "absolute count, or a fraction such as 0.5")
        ->capture_default_str();
    apriori->add_option("--minconf", apriori_minconf, "minimum rule confidence")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    apriori->add_option("--on-parse-error", apriori_on_error, "stop or skip")
        ->check(CLI::IsMember({"stop", "skip"}));

    // CLI11 does not pass a "--" through to a prefix command, so drop it here
    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty() && args.front() == "query") {
        const auto dashes = std::find(args.begin(), args.end(), "--");
        if (dashes != args.end()) {
            args.erase(dashes);
        }
    }
    std::reverse(args.begin(), args.end());

    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (*run) {
            return run_stream_command(run_flags);
        }
        if (*replay) {
            if (replay_flags.input == "-") {
                throw Error("replay needs --input PATH");
            }
            return run_stream_command(replay_flags);
        }
        if (*query) {
            std::vector<std::string> query_words = query->remaining();
            std::cout << query_static(load_snapshot_file(query_snapshot), query_words) << '\n';
            return 0;
        }
        if (*trace) {
            if (trace_steps == 0) {
                throw Error("--steps must be at least 1");
            }
            StreamFlags& f = trace_flags;
            f.snapshot.clear();
            std::optional<Engine> engine;
            engine.emplace(f.params.params);
            engine->set_query_sink([](const std::string& line) { std::cout << line << '\n'; });
            engine->set_event_sink([](const std::string& line) {
                if (line.find(" parse-skip ") != std::string::npos) {
                    std::cerr << "warning: " << line << '\n';
                }
            });
            StreamDriver driver(*engine, f.on_error == "skip" ? OnParseError::Skip : OnParseError::Stop);
            driver.schedule(inline_query("at " + std::to_string(trace_at) + " trace " + quote_token(trace_pair[0]) +
                                         " " + quote_token(trace_pair[1]) + " " + std::to_string(trace_steps)));
            Input input(f.input);
            run_stream(driver, input.stream());
            return 0;
        }
        if (*apriori) {
            return apriori_command(apriori_input, apriori_minsup, apriori_minconf, apriori_on_error == "skip");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
