/*
 * Copyright 2026 The RTABE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cctype>
#include <limits>

#include "absl/strings/str_cat.h"
#include "rtabe/policy.h"
#include "rtabe/status_macros.h"

namespace rtabe {
namespace {

class PolicyParser {
 public:
  PolicyParser(std::string_view text, std::optional<uint32_t> n_attrs)
      : text_(text), n_attrs_(n_attrs) {}

  absl::StatusOr<AccessTree> Parse() {
    RTABE_ASSIGN_OR_RETURN(AccessTree tree, ParseExpr(1));
    SkipSpace();
    if (pos_ != text_.size()) {
      return Error(pos_, "unexpected trailing input");
    }
    return tree;
  }

 private:
  absl::Status Error(size_t at, absl::string_view what) const {
    size_t line = 1, column = 1;
    for (size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    return absl::InvalidArgumentError(
        absl::StrCat("Policy syntax error at line ", line, ", column ", column,
                     ": ", what, "."));
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  absl::Status Expect(char c) {
    SkipSpace();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      return Error(pos_, absl::StrCat("expected '", std::string(1, c), "'"));
    }
    ++pos_;
    return absl::OkStatus();
  }

  std::string_view ReadWord() {
    SkipSpace();
    const size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  absl::StatusOr<uint32_t> ReadInt() {
    SkipSpace();
    const size_t start = pos_;
    uint64_t value = 0;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + static_cast<uint64_t>(text_[pos_] - '0');
      if (value > std::numeric_limits<uint32_t>::max()) {
        return Error(start, "integer too large");
      }
      ++pos_;
    }
    if (pos_ == start) return Error(start, "expected an integer");
    return static_cast<uint32_t>(value);
  }

  absl::StatusOr<std::vector<AccessTree>> ParseList(uint32_t depth) {
    std::vector<AccessTree> children;
    while (true) {
      RTABE_ASSIGN_OR_RETURN(AccessTree child, ParseExpr(depth + 1));
      children.push_back(std::move(child));
      SkipSpace();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      break;
    }
    RTABE_RETURN_IF_ERROR(Expect(')'));
    return children;
  }

  absl::StatusOr<AccessTree> ParseExpr(uint32_t depth) {
    SkipSpace();
    const size_t start = pos_;
    if (depth > kMaxPolicyDepth) {
      return Error(start,
                   absl::StrCat("nesting deeper than ", kMaxPolicyDepth));
    }
    const std::string_view word = ReadWord();
    if (word == "att") {
      const size_t at = pos_;
      RTABE_ASSIGN_OR_RETURN(uint32_t attribute, ReadInt());
      if (attribute == 0) return Error(at, "attribute ids start at 1");
      if (n_attrs_.has_value() && attribute > *n_attrs_) {
        return Error(at, absl::StrCat("attribute ", attribute,
                                      " outside the universe 1..", *n_attrs_));
      }
      return AccessTree::Leaf(attribute);
    }
    if (word == "and" || word == "or") {
      RTABE_RETURN_IF_ERROR(Expect('('));
      RTABE_ASSIGN_OR_RETURN(std::vector<AccessTree> children,
                             ParseList(depth));
      return word == "and" ? AccessTree::And(std::move(children))
                           : AccessTree::Or(std::move(children));
    }
    if (word == "thresh") {
      RTABE_RETURN_IF_ERROR(Expect('('));
      SkipSpace();
      const size_t at = pos_;
      RTABE_ASSIGN_OR_RETURN(uint32_t threshold, ReadInt());
      RTABE_RETURN_IF_ERROR(Expect(','));
      RTABE_ASSIGN_OR_RETURN(std::vector<AccessTree> children,
                             ParseList(depth));
      if (threshold < 1 || threshold > children.size()) {
        return Error(at, absl::StrCat("threshold ", threshold,
                                      " must lie in 1..", children.size()));
      }
      return AccessTree::Gate(threshold, std::move(children));
    }
    if (word.empty()) {
      return Error(start, pos_ < text_.size() ? "expected a policy expression"
                                              : "unexpected end of input");
    }
    return Error(start,
                 absl::StrCat("unknown keyword '", std::string(word), "'"));
  }

  std::string_view text_;
  std::optional<uint32_t> n_attrs_;
  size_t pos_ = 0;
};

}  // namespace

absl::StatusOr<AccessTree> ParsePolicy(std::string_view text,
                                       std::optional<uint32_t> n_attrs) {
  return PolicyParser(text, n_attrs).Parse();
}

}  // namespace rtabe
