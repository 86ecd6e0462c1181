#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lexsem/error.hpp"

namespace lexsem {

// A parsed s-expression node. Every node remembers where it started so that
// later stages can report errors against the original text.
struct Sexp {
  enum class Kind { symbol, string, list };

  Kind kind = Kind::list;
  std::string text;
  std::vector<Sexp> items;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_list() const { return kind == Kind::list; }
  bool is_atom() const { return kind != Kind::list; }
  bool is_symbol() const { return kind == Kind::symbol; }
  bool is_symbol(std::string_view s) const { return kind == Kind::symbol && text == s; }

  // True for a list whose first element is the given keyword.
  bool is_form(std::string_view head) const {
    return is_list() && !items.empty() && items.front().is_symbol(head);
  }

  [[noreturn]] void fail(errc code, const std::string& message) const {
    throw error(code, message, line, column);
  }
};

namespace detail {

class SexpReader {
 public:
  explicit SexpReader(std::string_view text) : text_(text) {}

  std::vector<Sexp> read_all() {
    std::vector<Sexp> out;
    skip_blank();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip_blank();
    }
    return out;
  }

 private:
  static bool is_delimiter(char c) {
    return c == '(' || c == ')' || c == '"' || c == ';' || c == ' ' || c == '\t' ||
           c == '\n' || c == '\r' || c == '\f' || c == '\v';
  }

  void advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      // continuation bytes of a UTF-8 sequence share the column of their lead byte
      ++column_;
    }
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        advance();
      } else {
        break;
      }
    }
  }

  Sexp read() {
    Sexp node;
    node.line = line_;
    node.column = column_;
    const char c = text_[pos_];
    if (c == ')') {
      throw error(errc::syntax, "unexpected ')'", line_, column_);
    }
    if (c == '(') {
      advance();
      node.kind = Sexp::Kind::list;
      for (;;) {
        skip_blank();
        if (pos_ >= text_.size()) {
          throw error(errc::syntax, "unbalanced parenthesis: list is never closed", node.line,
                      node.column);
        }
        if (text_[pos_] == ')') {
          advance();
          return node;
        }
        node.items.push_back(read());
      }
    }
    if (c == '"') {
      advance();
      node.kind = Sexp::Kind::string;
      for (;;) {
        if (pos_ >= text_.size()) {
          throw error(errc::syntax, "unterminated string literal", node.line, node.column);
        }
        char ch = text_[pos_];
        if (ch == '"') {
          advance();
          return node;
        }
        if (ch == '\\' && pos_ + 1 < text_.size()) {
          advance();
          ch = text_[pos_];
        }
        node.text.push_back(ch);
        advance();
      }
    }
    node.kind = Sexp::Kind::symbol;
    while (pos_ < text_.size() && !is_delimiter(text_[pos_])) {
      node.text.push_back(text_[pos_]);
      advance();
    }
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace detail

inline std::vector<Sexp> read_sexps(std::string_view text) {
  return detail::SexpReader(text).read_all();
}

// Reads exactly one s-expression; anything else is a syntax error.
inline Sexp read_sexp(std::string_view text) {
  auto all = read_sexps(text);
  if (all.empty()) throw error(errc::syntax, "empty input", 1, 1);
  if (all.size() > 1) {
    throw error(errc::syntax, "trailing input after expression", all[1].line, all[1].column);
  }
  return std::move(all.front());
}

inline bool needs_quoting(std::string_view s) {
  if (s.empty()) return true;
  for (char c : s) {
    if (c == '(' || c == ')' || c == '"' || c == ';' || c == ' ' || c == '\t' || c == '\n' ||
        c == '\r' || c == '\\')
      return true;
  }
  return false;
}

inline std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace lexsem
