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

#include <mindmap/snapshot.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>
#include <utility>

namespace mindmap {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

struct ParamField {
    std::string_view name;
    double EngineParams::*real;
};

constexpr ParamField kRealParams[] = {
    {"eta", &EngineParams::eta},         {"lambda", &EngineParams::lambda},   {"beta_w", &EngineParams::beta_w},
    {"beta_a", &EngineParams::beta_a},   {"epsilon", &EngineParams::epsilon}, {"theta_w", &EngineParams::theta_w},
    {"theta_a", &EngineParams::theta_a},
};
constexpr std::string_view kPromoteAfter = "promote_after";

class Loader {
  public:
    explicit Loader(std::string_view text) : text_(text) {}

    EngineState run() {
        std::vector<std::string> lines = split_lines();
        if (lines.empty() || lines.front().empty()) {
            throw SnapshotError(1, "missing header");
        }
        if (lines.front() != kSnapshotHeader) {
            if (lines.front().starts_with("MINDMAP ")) {
                throw SnapshotError(1, "unsupported snapshot version '" + lines.front().substr(8) + "'");
            }
            throw SnapshotError(1, "missing header");
        }

        EngineState state;
        bool have_step = false;
        std::size_t params_seen = 0;
        std::vector<bool> real_seen(std::size(kRealParams), false);
        bool promote_seen = false;

        for (std::size_t i = 1; i < lines.size(); ++i) {
            line_ = i + 1;
            if (lines[i].empty()) {
                continue;
            }
            std::vector<std::string> tok;
            try {
                tok = tokenize(lines[i]);
            } catch (const Error& e) {
                fail(e.what());
            }
            if (tok.empty()) {
                continue;
            }
            const std::string& kind = tok.front();
            if (kind == "step") {
                expect(tok, 2);
                if (have_step) {
                    fail("duplicate step line");
                }
                state.map.step = integer(tok[1]);
                have_step = true;
            } else if (kind == "param") {
                expect(tok, 3);
                bool known = false;
                for (std::size_t p = 0; p < std::size(kRealParams); ++p) {
                    if (tok[1] == kRealParams[p].name) {
                        if (real_seen[p]) {
                            fail("duplicate param " + tok[1]);
                        }
                        state.params.*kRealParams[p].real = real(tok[2]);
                        real_seen[p] = true;
                        known = true;
                    }
                }
                if (tok[1] == kPromoteAfter) {
                    if (promote_seen) {
                        fail("duplicate param " + tok[1]);
                    }
                    state.params.promote_after = integer(tok[2]);
                    promote_seen = true;
                    known = true;
                }
                if (!known) {
                    fail("unknown param " + tok[1]);
                }
                ++params_seen;
            } else if (kind == "cell") {
                expect(tok, 5);
                ItemLabel label = make_label(tok[1]);
                ItemCell cell{label, real(tok[2]), integer(tok[3]), integer(tok[4])};
                if (!state.map.cells.emplace(label, std::move(cell)).second) {
                    fail("duplicate cell " + tok[1]);
                }
            } else if (kind == "edge") {
                expect(tok, 5);
                ItemLabel a = make_label(tok[1]);
                ItemLabel b = make_label(tok[2]);
                if (!(a < b)) {
                    fail("edge labels must be distinct and in ascending order");
                }
                if (!state.map.cells.contains(a) || !state.map.cells.contains(b)) {
                    fail("edge endpoint has no cell line");
                }
                PairKey key(std::move(a), std::move(b));
                if (!state.map.edges.emplace(key, Connection{key, real(tok[3]), integer(tok[4])}).second) {
                    fail("duplicate edge");
                }
            } else if (kind == "ltm") {
                expect(tok, 5);
                LtmRecord record{signature(tok[1]), integer(tok[2]), std::nullopt, integer(tok[4])};
                if (tok[3] != "open") {
                    record.disappeared_at = integer(tok[3]);
                    if (*record.disappeared_at < record.appeared_at) {
                        fail("ltm record disappears before it appears");
                    }
                }
                if (record.recurrence_count == 0) {
                    fail("ltm recurrence count must be at least 1");
                }
                state.ltm.push_back(std::move(record));
            } else if (kind == "stm") {
                expect(tok, 4);
                StmEntry entry{signature(tok[1]), integer(tok[2]), integer(tok[3])};
                if (entry.consecutive_steps == 0) {
                    fail("stm consecutive count must be at least 1");
                }
                Signature key = entry.signature;
                if (!state.stm.emplace(std::move(key), std::move(entry)).second) {
                    fail("duplicate stm entry");
                }
            } else {
                fail("unknown line kind '" + kind + "'");
            }
        }

        std::sort(state.ltm.begin(), state.ltm.end(), [](const LtmRecord& a, const LtmRecord& b) {
            return std::tie(a.appeared_at, a.signature) < std::tie(b.appeared_at, b.signature);
        });

        line_ = lines.size();
        if (!have_step) {
            fail("missing step line");
        }
        if (params_seen != std::size(kRealParams) + 1) {
            fail("expected " + std::to_string(std::size(kRealParams) + 1) + " param lines");
        }
        try {
            state.params.validate();
        } catch (const Error& e) {
            fail(e.what());
        }
        if (auto problems = check_invariants(state.map); !problems.empty()) {
            fail(problems.front());
        }
        return state;
    }

  private:
    std::vector<std::string> split_lines() const {
        std::vector<std::string> lines;
        std::size_t start = 0;
        while (start < text_.size()) {
            std::size_t lf = text_.find('\n', start);
            if (lf == std::string_view::npos) {
                lf = text_.size();
            }
            lines.emplace_back(text_.substr(start, lf - start));
            start = lf + 1;
        }
        return lines;
    }

    [[noreturn]] void fail(const std::string& message) const { throw SnapshotError(line_, message); }

    void expect(const std::vector<std::string>& tok, std::size_t count) const {
        if (tok.size() != count) {
            fail("'" + tok.front() + "' line expects " + std::to_string(count - 1) + " fields");
        }
    }

    std::uint64_t integer(const std::string& text) const {
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            fail("bad integer '" + text + "'");
        }
        return value;
    }

    double real(const std::string& text) const {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            fail("bad number '" + text + "'");
        }
        return value;
    }

    ItemLabel make_label(const std::string& text) const {
        try {
            return ItemLabel(text);
        } catch (const Error& e) {
            fail(e.what());
        }
    }

    Signature signature(const std::string& text) const {
        try {
            Signature sig = parse_signature(text);
            if (sig.size() < 2) {
                fail("signature needs at least two labels");
            }
            return sig;
        } catch (const SnapshotError&) {
            throw;
        } catch (const Error& e) {
            fail(e.what());
        }
    }

    std::string_view text_;
    std::size_t line_ = 1;
};

}// namespace

SnapshotError::SnapshotError(std::size_t line, const std::string& message)
    : Error("snapshot line " + std::to_string(line) + ": " + message), line_(line) {}

std::string format_number(double value) {
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc{}) {
        throw Error("number formatting failed");
    }
    return {buffer, ptr};
}

std::string quote_token(std::string_view text) {
    bool plain = !text.empty() && text.front() != '"';
    for (char c : text) {
        if (is_blank(c) || c == '"' || c == '\\') {
            plain = false;
            break;
        }
    }
    if (plain) {
        return std::string(text);
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (is_blank(line[i])) {
            ++i;
            continue;
        }
        std::string token;
        if (line[i] == '"') {
            ++i;
            bool closed = false;
            while (i < line.size()) {
                const char c = line[i++];
                if (c == '\\' && i < line.size()) {
                    token += line[i++];
                } else if (c == '"') {
                    closed = true;
                    break;
                } else {
                    token += c;
                }
            }
            if (!closed) {
                throw Error("unterminated quote");
            }
        } else {
            while (i < line.size() && !is_blank(line[i])) {
                token += line[i++];
            }
        }
        tokens.push_back(std::move(token));
    }
    return tokens;
}

std::string save_snapshot(const EngineState& state) {
    std::ostringstream out;
    out << kSnapshotHeader << '\n';
    out << "step " << state.map.step << '\n';
    for (const auto& field : kRealParams) {
        out << "param " << field.name << ' ' << format_number(state.params.*field.real) << '\n';
    }
    out << "param " << kPromoteAfter << ' ' << state.params.promote_after << '\n';
    for (const auto& [label, cell] : state.map.cells) {
        out << "cell " << quote_token(label.str()) << ' ' << format_number(cell.activation) << ' '
            << cell.created_at << ' ' << cell.last_activated_at << '\n';
    }
    for (const auto& [key, edge] : state.map.edges) {
        out << "edge " << quote_token(key.first().str()) << ' ' << quote_token(key.second().str()) << ' '
            << format_number(edge.weight) << ' ' << edge.last_reinforced_at << '\n';
    }
    LongTermMemory ltm = state.ltm;
    std::sort(ltm.begin(), ltm.end(), [](const LtmRecord& a, const LtmRecord& b) {
        return std::tie(a.appeared_at, a.signature) < std::tie(b.appeared_at, b.signature);
    });
    for (const auto& record : ltm) {
        out << "ltm " << quote_token(signature_string(record.signature)) << ' ' << record.appeared_at << ' ';
        if (record.disappeared_at) {
            out << *record.disappeared_at;
        } else {
            out << "open";
        }
        out << ' ' << record.recurrence_count << '\n';
    }
    for (const auto& [sig, entry] : state.stm) {
        out << "stm " << quote_token(signature_string(sig)) << ' ' << entry.first_seen_step << ' '
            << entry.consecutive_steps << '\n';
    }
    return out.str();
}

EngineState load_snapshot(std::string_view text) { return Loader(text).run(); }

void save_snapshot_file(const EngineState& state, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    file << save_snapshot(state);
    if (!file) {
        throw Error("failed writing " + path.string());
    }
}

EngineState load_snapshot_file(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw Error("cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return load_snapshot(buffer.str());
}

}// namespace mindmap
