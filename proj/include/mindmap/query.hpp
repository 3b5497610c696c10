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

#include <mindmap/snapshot.hpp>

#include <span>
#include <string>

namespace mindmap {

class QueryError : public Error {
  public:
    using Error::Error;
};

/// Answers a one-time query against a snapshot without modifying it.
///
///   weight <a> <b>                         weight or "absent"
///   activation <a>                         activation or "absent"
///   skeleton [--theta-w X] [--theta-a Y]   "nodes ..." then one "edge a b w" per edge
///   rules [--theta-w X] [--theta-a Y]      "a => b w" per rule
///   patterns                               "pattern <signature>" at the stored thresholds
///   stm                                    "stm <signature> <first_seen> <consecutive>"
///   ltm [all|open|closed|<signature>]      "ltm <signature> <appeared> <disappeared|open> <recurrence>"
///   strongest [--theta-w X] [--top K]      "<rank> <signature> <mean weight>"
///
/// Thresholds default to the snapshot's parameters. Reals are printed with six
/// decimals; list answers with no entries print "none". Throws QueryError on
/// malformed queries.
std::string query_static(const EngineState& state, std::span<const std::string> words);

}// namespace mindmap
