// Copyright 2026 The quqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "quqkd/messages.hpp"

#include <charconv>
#include <stdexcept>
#include <string>

namespace quqkd {

namespace {

[[noreturn]] void malformed(std::string_view line, std::string_view why) {
  throw std::invalid_argument("malformed message (" + std::string(why) + "): " +
                              std::string(line));
}

template <typename Int>
Int parse_int(std::string_view text, std::string_view line) {
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    malformed(line, "bad integer");
  }
  return value;
}

std::string_view expect_field(std::string_view token, std::string_view key,
                              std::string_view line) {
  if (token.size() <= key.size() || token.substr(0, key.size()) != key ||
      token[key.size()] != '=') {
    malformed(line, "expected field " + std::string(key));
  }
  return token.substr(key.size() + 1);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  if (text.empty()) {
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

std::string join_outcomes(const RoundOutcomes& outcomes) {
  std::string out;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(outcomes[i].first);
    out += ':';
    out += to_string(outcomes[i].second.label);
  }
  return out;
}

RoundOutcomes parse_outcomes(std::string_view text, std::string_view line) {
  RoundOutcomes out;
  for (auto item : split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      malformed(line, "expected round:label");
    }
    auto label = parse_key_label(item.substr(colon + 1));
    if (!label) {
      malformed(line, "unknown key label");
    }
    out.emplace_back(parse_int<std::size_t>(item.substr(0, colon), line), KeyOutcome{*label});
  }
  return out;
}

struct Serializer {
  std::string operator()(const OperatorAnnouncement& m) const {
    return "OperatorAnnouncement round=" + std::to_string(m.round) +
           " op=" + std::string(to_string(m.op)) + " outcome=" + std::to_string(m.outcome);
  }
  std::string operator()(const SampleCheckRequest& m) const {
    std::string out = "SampleCheckRequest rounds=";
    for (std::size_t i = 0; i < m.rounds.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(m.rounds[i]);
    }
    return out;
  }
  std::string operator()(const SampleCheckReveal& m) const {
    return "SampleCheckReveal outcomes=" + join_outcomes(m.outcomes);
  }
  std::string operator()(const ControlReveal& m) const {
    return "ControlReveal outcomes=" + join_outcomes(m.outcomes);
  }
  std::string operator()(const Abort& m) const { return "Abort reason=" + m.reason; }
};

}  // namespace

std::string_view to_string(Party party) {
  switch (party) {
    case Party::alice: return "alice";
    case Party::bob: return "bob";
    case Party::charlie: return "charlie";
  }
  return "?";
}

std::optional<Party> parse_party(std::string_view text) {
  for (auto p : {Party::alice, Party::bob, Party::charlie}) {
    if (to_string(p) == text) {
      return p;
    }
  }
  return std::nullopt;
}

std::string ClassicalMessage::serialize() const {
  return std::string(to_string(sender)) + " " + std::visit(Serializer{}, body);
}

ClassicalMessage ClassicalMessage::parse(std::string_view line) {
  const auto first = line.find(' ');
  if (first == std::string_view::npos) {
    malformed(line, "missing kind");
  }
  auto sender = parse_party(line.substr(0, first));
  if (!sender) {
    malformed(line, "unknown sender");
  }
  std::string_view rest = line.substr(first + 1);
  const auto second = rest.find(' ');
  const std::string_view kind = rest.substr(0, second);
  const std::string_view args =
      second == std::string_view::npos ? std::string_view{} : rest.substr(second + 1);

  if (kind == "OperatorAnnouncement") {
    auto fields = split(args, ' ');
    if (fields.size() != 3) {
      malformed(line, "OperatorAnnouncement takes three fields");
    }
    auto op = parse_observable_name(expect_field(fields[1], "op", line));
    if (!op) {
      malformed(line, "unknown operator");
    }
    const int outcome = parse_int<int>(expect_field(fields[2], "outcome", line), line);
    if (outcome != 1 && outcome != -1) {
      malformed(line, "outcome must be +1 or -1");
    }
    return {*sender, OperatorAnnouncement{
                         parse_int<std::size_t>(expect_field(fields[0], "round", line), line),
                         *op, outcome}};
  }
  if (kind == "SampleCheckRequest") {
    SampleCheckRequest req;
    for (auto item : split(expect_field(args.empty() ? "rounds=" : args, "rounds", line), ',')) {
      req.rounds.push_back(parse_int<std::size_t>(item, line));
    }
    return {*sender, std::move(req)};
  }
  if (kind == "SampleCheckReveal") {
    return {*sender,
            SampleCheckReveal{parse_outcomes(expect_field(args, "outcomes", line), line)}};
  }
  if (kind == "ControlReveal") {
    return {*sender, ControlReveal{parse_outcomes(expect_field(args, "outcomes", line), line)}};
  }
  if (kind == "Abort") {
    if (args.substr(0, 7) != "reason=") {
      malformed(line, "expected reason");
    }
    return {*sender, Abort{std::string(args.substr(7))}};
  }
  malformed(line, "unknown kind");
}

void MessageBus::post(ClassicalMessage message) {
  transcript_.push_back(message.serialize());
  queue_.push_back(std::move(message));
}

std::optional<ClassicalMessage> MessageBus::next() {
  if (queue_.empty()) {
    return std::nullopt;
  }
  ClassicalMessage m = std::move(queue_.front());
  queue_.pop_front();
  return m;
}

}  // namespace quqkd
