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

#include <mindmap/types.hpp>

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mindmap {

/// One line of the input stream: `date;ref;name`.
struct StreamRecord {
    std::chrono::year_month_day date{};
    std::uint64_t ref = 0;
    ItemLabel name;

    TransactionId tid() const { return {date, ref}; }

    bool operator==(const StreamRecord&) const = default;
};

class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& message);

    std::size_t line() const noexcept { return line_; }
    const std::string& message() const noexcept { return message_; }

  private:
    std::size_t line_;
    std::string message_;
};

/// Parses `YYYY-MM-DD;ref;name`, trimming whitespace around each field.
/// Throws ParseError tagged with `line_no`.
StreamRecord parse_record(std::string_view line, std::size_t line_no = 0);

/// Inverse of parse_record for names without ';' or surrounding blanks.
std::string format_record(const StreamRecord& record);

std::string format_date(const std::chrono::year_month_day& date);
std::string format_tid(const TransactionId& tid);

/// Folds consecutive records with equal TIDs into one transaction. A TID
/// that returns after a different one starts a new transaction.
class TransactionGrouper {
  public:
    /// Returns the transaction closed by this record's TID change, if any.
    std::optional<Transaction> push(const StreamRecord& record);

    /// Flushes the open transaction at end of stream.
    std::optional<Transaction> finish();

  private:
    std::optional<Transaction> open_;
};

std::vector<Transaction> group_transactions(const std::vector<StreamRecord>& records);

/// Outcome of one non-blank, non-comment input line.
struct ParsedLine {
    std::size_t line_no = 0;
    std::optional<StreamRecord> record;
    std::string error;   // set when record is empty
};

/// Splits arbitrary text chunks into lines and parses them. Output does not
/// depend on where the chunk boundaries fall.
class RecordReader {
  public:
    std::vector<ParsedLine> feed(std::string_view chunk);

    /// Parses a trailing line that had no terminating LF.
    std::vector<ParsedLine> finish();

    std::size_t lines_seen() const noexcept { return line_no_; }

  private:
    void consume_line(std::string_view line, std::vector<ParsedLine>& out);

    std::string pending_;
    std::size_t line_no_ = 0;
};

}// namespace mindmap
