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

#include <mindmap/query.hpp>

#include <mindmap/memory.hpp>
#include <mindmap/skeleton.hpp>

#include <charconv>
#include <cstdio>
#include <optional>
#include <vector>

namespace mindmap {

namespace {

std::string fixed6(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6f", value);
    return buffer;
}

std::string optional_value(const std::optional<double>& value) {
    return value ? fixed6(*value) : std::string("absent");
}

std::string join_lines(const std::vector<std::string>& lines) {
    if (lines.empty()) {
        return "none";
    }
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i > 0) {
            out += '\n';
        }
        out += lines[i];
    }
    return out;
}

/// `--flag value` pairs following the query verb.
class Flags {
  public:
    Flags(std::span<const std::string> words, std::initializer_list<std::string_view> allowed) {
        for (std::size_t i = 0; i < words.size(); i += 2) {
            bool known = false;
            for (auto name : allowed) {
                known = known || words[i] == name;
            }
            if (!known) {
                throw QueryError("unexpected argument '" + words[i] + "'");
            }
            if (i + 1 >= words.size()) {
                throw QueryError("missing value for " + words[i]);
            }
            values_.emplace_back(words[i], words[i + 1]);
        }
    }

    double real(std::string_view name, double fallback) const {
        const std::string* text = find(name);
        if (!text) {
            return fallback;
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
        if (ec != std::errc{} || ptr != text->data() + text->size()) {
            throw QueryError("bad value for " + std::string(name) + ": '" + *text + "'");
        }
        return value;
    }

    std::size_t count(std::string_view name, std::size_t fallback) const {
        const std::string* text = find(name);
        if (!text) {
            return fallback;
        }
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
        if (ec != std::errc{} || ptr != text->data() + text->size() || value == 0) {
            throw QueryError("bad value for " + std::string(name) + ": '" + *text + "'");
        }
        return value;
    }

  private:
    const std::string* find(std::string_view name) const {
        const std::string* hit = nullptr;
        for (const auto& [flag, value] : values_) {
            if (flag == name) {
                hit = &value;
            }
        }
        return hit;
    }

    std::vector<std::pair<std::string, std::string>> values_;
};

ItemLabel label_arg(const std::string& text) {
    try {
        return ItemLabel(text);
    } catch (const Error&) {
        throw QueryError("empty item label");
    }
}

std::string ltm_line(const LtmRecord& r) {
    return "ltm " + quote_token(signature_string(r.signature)) + " " + std::to_string(r.appeared_at) + " " +
           (r.disappeared_at ? std::to_string(*r.disappeared_at) : std::string("open")) + " " +
           std::to_string(r.recurrence_count);
}

}// namespace

std::string query_static(const EngineState& state, std::span<const std::string> words) {
    if (words.empty()) {
        throw QueryError("empty query");
    }
    const std::string& verb = words.front();
    const auto args = words.subspan(1);
    const MindMap& map = state.map;
    const EngineParams& params = state.params;

    if (verb == "weight") {
        if (args.size() != 2) {
            throw QueryError("usage: weight <a> <b>");
        }
        const ItemLabel a = label_arg(args[0]);
        const ItemLabel b = label_arg(args[1]);
        if (a == b) {
            throw QueryError("self-pair");
        }
        return optional_value(get_weight(map, a, b));
    }
    if (verb == "activation") {
        if (args.size() != 1) {
            throw QueryError("usage: activation <a>");
        }
        return optional_value(get_activation(map, label_arg(args[0])));
    }
    if (verb == "skeleton" || verb == "rules") {
        const Flags flags(args, {"--theta-w", "--theta-a"});
        const Skeleton skeleton =
            extract_skeleton(map, flags.real("--theta-w", params.theta_w), flags.real("--theta-a", params.theta_a));
        std::vector<std::string> lines;
        if (verb == "skeleton") {
            std::string nodes = "nodes";
            for (const auto& node : skeleton.nodes) {
                nodes += " " + quote_token(node.str());
            }
            lines.push_back(nodes);
            for (const auto& [key, weight] : skeleton.edges) {
                lines.push_back("edge " + quote_token(key.first().str()) + " " + quote_token(key.second().str()) +
                                " " + fixed6(weight));
            }
        } else {
            for (const auto& rule : derive_rules(skeleton)) {
                lines.push_back(quote_token(rule.antecedent.str()) + " => " + quote_token(rule.consequent.str()) +
                                " " + fixed6(rule.weight));
            }
        }
        return join_lines(lines);
    }
    if (verb == "patterns") {
        if (!args.empty()) {
            throw QueryError("usage: patterns");
        }
        std::vector<std::string> lines;
        for (const auto& pattern : detect_patterns(extract_skeleton(map, params.theta_w, params.theta_a))) {
            lines.push_back("pattern " + quote_token(signature_string(pattern.signature)));
        }
        return join_lines(lines);
    }
    if (verb == "stm") {
        if (!args.empty()) {
            throw QueryError("usage: stm");
        }
        std::vector<std::string> lines;
        for (const auto& [sig, entry] : state.stm) {
            lines.push_back("stm " + quote_token(signature_string(sig)) + " " + std::to_string(entry.first_seen_step) +
                            " " + std::to_string(entry.consecutive_steps));
        }
        return join_lines(lines);
    }
    if (verb == "ltm") {
        if (args.size() > 1) {
            throw QueryError("usage: ltm [all|open|closed|<signature>]");
        }
        LtmFilter filter = LtmFilter::all();
        if (!args.empty()) {
            if (args[0] == "open") {
                filter = LtmFilter::open();
            } else if (args[0] == "closed") {
                filter = LtmFilter::closed();
            } else if (args[0] != "all") {
                try {
                    filter = LtmFilter::by_signature(parse_signature(args[0]));
                } catch (const Error& e) {
                    throw QueryError(std::string("bad signature: ") + e.what());
                }
            }
        }
        std::vector<std::string> lines;
        for (const auto& record : query_ltm(state.ltm, filter)) {
            lines.push_back(ltm_line(record));
        }
        return join_lines(lines);
    }
    if (verb == "strongest") {
        const Flags flags(args, {"--theta-w", "--top"});
        const auto ranked = strongest_subgraphs(map, flags.real("--theta-w", params.theta_w), flags.count("--top", 1));
        std::vector<std::string> lines;
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            lines.push_back(std::to_string(i + 1) + " " +
                            quote_token(signature_string({ranked[i].nodes.begin(), ranked[i].nodes.end()})) + " " +
                            fixed6(ranked[i].mean_weight()));
        }
        return join_lines(lines);
    }
    throw QueryError("unknown query '" + verb + "'");
}

}// namespace mindmap
