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

#include <mindmap/stream.hpp>

#include <cctype>
#include <charconv>
#include <cstdio>

namespace mindmap {

namespace {

std::string_view trim(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    return text;
}

bool all_digits(std::string_view text) {
    for (char c : text) {
        if (c < '0' || c > '9') {
            return false;
        }
    }
    return !text.empty();
}

template<typename T>
T parse_unsigned(std::string_view text) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::out_of_range("number out of range");
    }
    return value;
}

std::chrono::year_month_day parse_date(std::string_view text, std::size_t line_no) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !all_digits(text.substr(0, 4)) ||
        !all_digits(text.substr(5, 2)) || !all_digits(text.substr(8, 2))) {
        throw ParseError(line_no, "bad date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    const std::chrono::year_month_day date{std::chrono::year{parse_unsigned<int>(text.substr(0, 4))},
                                           std::chrono::month{parse_unsigned<unsigned>(text.substr(5, 2))},
                                           std::chrono::day{parse_unsigned<unsigned>(text.substr(8, 2))}};
    if (!date.ok()) {
        throw ParseError(line_no, "bad date '" + std::string(text) + "', no such calendar day");
    }
    return date;
}

}// namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error("line " + std::to_string(line) + ": " + message), line_(line), message_(message) {}

StreamRecord parse_record(std::string_view line, std::size_t line_no) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t cut = line.find(';', start);
        fields.push_back(trim(line.substr(start, cut == std::string_view::npos ? std::string_view::npos : cut - start)));
        if (cut == std::string_view::npos) {
            break;
        }
        start = cut + 1;
    }
    if (fields.size() != 3) {
        throw ParseError(line_no, "expected 3 fields, found " + std::to_string(fields.size()));
    }

    const auto date = parse_date(fields[0], line_no);

    if (!all_digits(fields[1])) {
        throw ParseError(line_no, "bad ref '" + std::string(fields[1]) + "'");
    }
    std::uint64_t ref = 0;
    try {
        ref = parse_unsigned<std::uint64_t>(fields[1]);
    } catch (const std::out_of_range&) {
        throw ParseError(line_no, "ref out of range '" + std::string(fields[1]) + "'");
    }

    if (fields[2].empty()) {
        throw ParseError(line_no, "empty name");
    }
    return StreamRecord{date, ref, ItemLabel(std::string(fields[2]))};
}

std::string format_date(const std::chrono::year_month_day& date) {
    char buffer[16];
    std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buffer;
}

std::string format_tid(const TransactionId& tid) { return format_date(tid.date) + ";" + std::to_string(tid.ref); }

std::string format_record(const StreamRecord& record) {
    return format_tid(record.tid()) + ";" + record.name.str();
}

std::optional<Transaction> TransactionGrouper::push(const StreamRecord& record) {
    std::optional<Transaction> closed;
    if (open_ && !(open_->tid == record.tid())) {
        closed = std::move(open_);
        open_.reset();
    }
    if (!open_) {
        open_ = Transaction{record.tid(), {}};
    }
    ++open_->items[record.name];
    return closed;
}

std::optional<Transaction> TransactionGrouper::finish() {
    std::optional<Transaction> closed = std::move(open_);
    open_.reset();
    return closed;
}

std::vector<Transaction> group_transactions(const std::vector<StreamRecord>& records) {
    std::vector<Transaction> out;
    TransactionGrouper grouper;
    for (const auto& record : records) {
        if (auto txn = grouper.push(record)) {
            out.push_back(std::move(*txn));
        }
    }
    if (auto txn = grouper.finish()) {
        out.push_back(std::move(*txn));
    }
    return out;
}

std::vector<ParsedLine> RecordReader::feed(std::string_view chunk) {
    std::vector<ParsedLine> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t lf = chunk.find('\n', start);
        if (lf == std::string_view::npos) {
            pending_.append(chunk.substr(start));
            break;
        }
        pending_.append(chunk.substr(start, lf - start));
        consume_line(pending_, out);
        pending_.clear();
        start = lf + 1;
    }
    return out;
}

std::vector<ParsedLine> RecordReader::finish() {
    std::vector<ParsedLine> out;
    if (!pending_.empty()) {
        consume_line(pending_, out);
        pending_.clear();
    }
    return out;
}

void RecordReader::consume_line(std::string_view line, std::vector<ParsedLine>& out) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    if (trim(line).empty() || line.front() == '#') {
        return;
    }
    ParsedLine parsed;
    parsed.line_no = line_no_;
    try {
        parsed.record = parse_record(line, line_no_);
    } catch (const ParseError& e) {
        parsed.error = e.message();
    }
    out.push_back(std::move(parsed));
}

}// namespace mindmap
