// Copyright 2026 The seqlat authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "seqlat/alphabet.hpp"
#include "seqlat/errors.hpp"
#include "seqlat/sequence.hpp"

// Compact text syntax for elements, sequences and patterns, e.g.
//   <[H2,{c,d}];[H3,{b,d}]>      two events of a taxonomy+itemset schema
//   [CHU,{mp1,mp2},1..1]         one event with a repetition interval
// Field order follows the schema. Elements are separated by ';' or ','.

namespace seqlat {

inline std::string to_text(const AlphabetSchema& schema, const Element& e) {
  std::string out = "[";
  for (std::size_t i = 0; i < e.values.size(); ++i) {
    if (i) out += ',';
    switch (schema.field(i).kind) {
      case FieldKind::taxonomy:
        out += std::get<std::string>(e.values[i]);
        break;
      case FieldKind::itemset: {
        out += '{';
        const ItemSet& items = std::get<ItemSet>(e.values[i]);
        for (std::size_t j = 0; j < items.size(); ++j) {
          if (j) out += ',';
          out += items[j];
        }
        out += '}';
        break;
      }
      case FieldKind::interval: {
        const Interval iv = std::get<Interval>(e.values[i]);
        out += std::to_string(iv.lo) + ".." + std::to_string(iv.hi);
        break;
      }
    }
  }
  out += ']';
  return out;
}

inline std::string to_text(const AlphabetSchema& schema, const Sequence& s) {
  std::string out = "<";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ';';
    out += to_text(schema, s.elements[i]);
  }
  out += '>';
  return out;
}

inline std::string to_text(const AlphabetSchema& schema, const Pattern& p) {
  std::string out = "{";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ' ';
    out += to_text(schema, p.sequences()[i]);
  }
  out += '}';
  return out;
}

namespace detail {

class TextCursor {
public:
  TextCursor(std::string_view text, std::string_view what) : text_(text), what_(what) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool try_consume(char ch) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char ch) {
    if (!try_consume(ch)) fail(std::string("expected '") + ch + "'");
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }

  std::string token() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_.find_first_of("[]{}<>,;", pos_) != pos_ &&
           !std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) fail("expected a token");
    return std::string(text_.substr(start, pos_ - start));
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError(std::string(what_) + ": " + msg + " at offset " + std::to_string(pos_) +
                     " in '" + std::string(text_) + "'");
  }

private:
  std::string_view text_;
  std::string_view what_;
  std::size_t pos_ = 0;
};

inline Value parse_value(TextCursor& cur, const AlphabetSchema& schema, std::size_t field) {
  switch (schema.field(field).kind) {
    case FieldKind::taxonomy:
      return cur.token();
    case FieldKind::itemset: {
      cur.expect('{');
      ItemSet items;
      if (!cur.try_consume('}')) {
        do {
          items.push_back(cur.token());
        } while (cur.try_consume(','));
        cur.expect('}');
      }
      std::sort(items.begin(), items.end());
      items.erase(std::unique(items.begin(), items.end()), items.end());
      return items;
    }
    default: {
      const std::string tok = cur.token();
      const auto dots = tok.find("..");
      Interval iv;
      try {
        if (dots == std::string::npos) {
          iv.lo = iv.hi = static_cast<std::uint32_t>(std::stoul(tok));
        } else {
          iv.lo = static_cast<std::uint32_t>(std::stoul(tok.substr(0, dots)));
          iv.hi = static_cast<std::uint32_t>(std::stoul(tok.substr(dots + 2)));
        }
      } catch (const std::exception&) {
        cur.fail("bad interval '" + tok + "'");
      }
      return iv;
    }
  }
}

inline Element parse_element(TextCursor& cur, const AlphabetSchema& schema) {
  cur.expect('[');
  Element e;
  for (std::size_t i = 0; i < schema.field_count(); ++i) {
    if (i) cur.expect(',');
    e.values.push_back(parse_value(cur, schema, i));
  }
  cur.expect(']');
  validate_element(schema, e);
  return e;
}

}  // namespace detail

/// Parses "<[H1,{a}];[H1,{c,d}]>"; the empty sequence "<>" is allowed.
inline Sequence parse_sequence_text(const AlphabetSchema& schema, std::string_view text) {
  detail::TextCursor cur(text, "sequence");
  cur.expect('<');
  Sequence s;
  if (!cur.try_consume('>')) {
    do {
      s.elements.push_back(detail::parse_element(cur, schema));
    } while (cur.try_consume(';') || cur.try_consume(','));
    cur.expect('>');
  }
  if (!cur.done()) cur.fail("trailing input");
  return s;
}

/// Parses "{<...> <...>}" (or a bare whitespace-separated list of sequences)
/// into a canonical pattern.
inline Pattern parse_pattern_text(const AlphabetSchema& schema, std::string_view text) {
  detail::TextCursor cur(text, "pattern");
  const bool braced = cur.try_consume('{');
  std::vector<Sequence> seqs;
  while (cur.peek() == '<') {
    Sequence s;
    cur.expect('<');
    if (!cur.try_consume('>')) {
      do {
        s.elements.push_back(detail::parse_element(cur, schema));
      } while (cur.try_consume(';') || cur.try_consume(','));
      cur.expect('>');
    }
    seqs.push_back(std::move(s));
  }
  if (braced) cur.expect('}');
  if (!cur.done()) cur.fail("trailing input");
  return maximal_antichain(schema, std::move(seqs));
}

}  // namespace seqlat
