#include "sckg/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "sckg/error.hpp"
#include "sckg/io.hpp"

namespace sckg::rdf {
namespace {

bool is_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_prefix_label(std::string_view label) {
  if (label.empty()) return true;
  if (!is_alpha(label.front())) return false;
  return std::all_of(label.begin(), label.end(),
                     [](char c) { return is_alpha(c) || is_digit(c) || c == '_' || c == '-'; });
}

// Conservative PN_LOCAL subset: what the writer is willing to abbreviate.
bool is_simple_local(std::string_view local) {
  if (local.empty() || local.back() == '.') return false;
  const char first = local.front();
  if (!(is_alpha(first) || is_digit(first) || first == '_')) return false;
  return std::all_of(local.begin(), local.end(), [](char c) {
    return is_alpha(c) || is_digit(c) || c == '_' || c == '-' || c == '.';
  });
}

bool is_integer_lexical(std::string_view s) {
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), is_digit);
}

bool is_decimal_lexical(std::string_view s) {
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
  const auto dot = s.find('.');
  if (dot == std::string_view::npos || dot + 1 == s.size()) return false;
  const auto whole = s.substr(0, dot);
  const auto frac = s.substr(dot + 1);
  return std::all_of(whole.begin(), whole.end(), is_digit) &&
         std::all_of(frac.begin(), frac.end(), is_digit);
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string escape_string(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out += '"';
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7F) {
          out += fmt::format("\\u{:04X}", static_cast<unsigned>(static_cast<unsigned char>(c)));
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

class TermWriter {
 public:
  explicit TermWriter(const std::map<std::string, std::string>& prefixes) : prefixes_(prefixes) {}

  std::string iri(const Iri& iri) const {
    const std::pair<const std::string, std::string>* best = nullptr;
    for (const auto& entry : prefixes_) {
      const auto& ns = entry.second;
      if (iri.value.size() <= ns.size() || iri.value.compare(0, ns.size(), ns) != 0) continue;
      if (!is_simple_local(std::string_view(iri.value).substr(ns.size()))) continue;
      if (!best || ns.size() > best->second.size()) best = &entry;
    }
    if (best) return best->first + ":" + iri.value.substr(best->second.size());
    return "<" + iri.value + ">";
  }

  std::string object(const Object& object) const {
    if (const auto* i = std::get_if<Iri>(&object)) return iri(*i);
    const auto& lit = std::get<Literal>(object);
    switch (lit.type) {
      case Literal::Type::kString:
        return escape_string(lit.lexical);
      case Literal::Type::kInteger:
        if (is_integer_lexical(lit.lexical)) return lit.lexical;
        return escape_string(lit.lexical) + "^^" + iri(vocab::xsd("integer"));
      case Literal::Type::kDecimal:
        if (is_decimal_lexical(lit.lexical)) return lit.lexical;
        return escape_string(lit.lexical) + "^^" + iri(vocab::xsd("decimal"));
    }
    return {};
  }

 private:
  const std::map<std::string, std::string>& prefixes_;
};

// ---- reader -----------------------------------------------------------------

class TurtleReader {
 public:
  explicit TurtleReader(std::string_view text) : text_(text) {}

  GraphDocument read() {
    skip_ws();
    while (!at_end()) {
      if (peek() == '@') {
        directive_at();
      } else if (keyword_ahead("PREFIX")) {
        pos_ += 6;
        prefix_body(false);
      } else if (keyword_ahead("BASE")) {
        fail("base IRIs are not supported");
      } else {
        statement();
      }
      skip_ws();
    }
    return std::move(graph_);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    const auto [line, column] = line_column(text_, pos_);
    throw ParseError(message, line, column);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void skip_ws() {
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos_;
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool keyword_ahead(std::string_view word) const {
    if (text_.size() - pos_ < word.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i) {
      const char c = text_[pos_ + i];
      if (std::toupper(static_cast<unsigned char>(c)) != word[i]) return false;
    }
    const char after = peek(word.size());
    return after == ' ' || after == '\t' || after == '\n' || after == '\r';
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(fmt::format("expected '{}'", c));
    ++pos_;
  }

  void directive_at() {
    if (text_.substr(pos_, 7) == "@prefix") {
      pos_ += 7;
      prefix_body(true);
    } else if (text_.substr(pos_, 5) == "@base") {
      fail("base IRIs are not supported");
    } else {
      fail("unknown directive");
    }
  }

  void prefix_body(bool needs_dot) {
    skip_ws();
    const std::size_t start = pos_;
    while (!at_end() && peek() != ':') {
      const char c = peek();
      if (!(is_alpha(c) || is_digit(c) || c == '_' || c == '-' || c == '.')) {
        fail("malformed prefix label");
      }
      ++pos_;
    }
    if (at_end()) fail("expected ':' after prefix label");
    std::string label(text_.substr(start, pos_ - start));
    ++pos_;
    skip_ws();
    Iri ns = iriref();
    try {
      graph_.add_prefix(label, ns.value);
    } catch (const Error& e) {
      fail(e.what());
    }
    if (needs_dot) expect('.');
  }

  std::uint32_t hex_digits(int count) {
    std::uint32_t value = 0;
    for (int i = 0; i < count; ++i) {
      const char c = peek();
      value <<= 4;
      if (is_digit(c)) {
        value |= static_cast<std::uint32_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        value |= static_cast<std::uint32_t>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        value |= static_cast<std::uint32_t>(c - 'A' + 10);
      } else {
        fail("bad hex digit in escape");
      }
      ++pos_;
    }
    return value;
  }

  Iri iriref() {
    if (peek() != '<') fail("expected '<'");
    ++pos_;
    std::string value;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      const char c = peek();
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        ++pos_;
        const char kind = peek();
        ++pos_;
        if (kind == 'u') {
          append_utf8(value, hex_digits(4));
        } else if (kind == 'U') {
          append_utf8(value, hex_digits(8));
        } else {
          fail("bad escape in IRI");
        }
        continue;
      }
      value += c;
      ++pos_;
    }
    if (!is_valid_iri(value)) fail("relative or malformed IRI <" + value + ">");
    return Iri{std::move(value)};
  }

  Iri prefixed_name() {
    const std::size_t start = pos_;
    while (!at_end() && peek() != ':') {
      const char c = peek();
      if (!(is_alpha(c) || is_digit(c) || c == '_' || c == '-' || c == '.')) {
        fail("expected an IRI or prefixed name");
      }
      ++pos_;
    }
    if (at_end()) fail("expected ':' in prefixed name");
    const std::string label(text_.substr(start, pos_ - start));
    ++pos_;
    const auto ns = graph_.prefixes().find(label);
    if (ns == graph_.prefixes().end()) fail("undeclared prefix '" + label + "'");
    std::string local;
    while (!at_end()) {
      const char c = peek();
      if (is_alpha(c) || is_digit(c) || c == '_' || c == '-' || c == ':' ||
          static_cast<unsigned char>(c) >= 0x80) {
        local += c;
        ++pos_;
      } else if (c == '.') {
        // A trailing '.' ends the statement instead.
        const char next = peek(1);
        if (is_alpha(next) || is_digit(next) || next == '_' || next == '-' || next == ':' ||
            next == '.' || next == '%' || next == '\\') {
          local += c;
          ++pos_;
        } else {
          break;
        }
      } else if (c == '%') {
        local.append(text_.substr(pos_, 3));
        pos_ += 3;
      } else if (c == '\\') {
        local += peek(1);
        pos_ += 2;
      } else {
        break;
      }
    }
    return Iri{ns->second + local};
  }

  Iri iri() {
    skip_ws();
    if (peek() == '<') return iriref();
    if (peek() == '_' && peek(1) == ':') fail("blank nodes are not supported");
    if (peek() == '[') fail("blank nodes are not supported");
    if (peek() == '(') fail("collections are not supported");
    return prefixed_name();
  }

  std::string quoted() {
    const char quote = peek();
    const bool long_form = peek(1) == quote && peek(2) == quote;
    pos_ += long_form ? 3 : 1;
    std::string value;
    while (true) {
      if (at_end()) fail("unterminated string");
      const char c = peek();
      if (long_form) {
        if (c == quote && peek(1) == quote && peek(2) == quote) {
          pos_ += 3;
          break;
        }
      } else if (c == quote) {
        ++pos_;
        break;
      } else if (c == '\n' || c == '\r') {
        fail("newline in short string");
      }
      if (c == '\\') {
        ++pos_;
        const char e = peek();
        ++pos_;
        switch (e) {
          case 't': value += '\t'; break;
          case 'b': value += '\b'; break;
          case 'n': value += '\n'; break;
          case 'r': value += '\r'; break;
          case 'f': value += '\f'; break;
          case '"': value += '"'; break;
          case '\'': value += '\''; break;
          case '\\': value += '\\'; break;
          case 'u': append_utf8(value, hex_digits(4)); break;
          case 'U': append_utf8(value, hex_digits(8)); break;
          default: fail("bad string escape");
        }
        continue;
      }
      value += c;
      ++pos_;
    }
    return value;
  }

  Object object() {
    skip_ws();
    const char c = peek();
    if (c == '"' || c == '\'') {
      std::string value = quoted();
      if (peek() == '@') fail("language-tagged literals are not supported");
      if (peek() == '^' && peek(1) == '^') {
        pos_ += 2;
        const Iri type = iri();
        if (type == vocab::xsd("string")) return Literal{Literal::Type::kString, value};
        if (type == vocab::xsd("integer")) return Literal{Literal::Type::kInteger, value};
        if (type == vocab::xsd("decimal")) return Literal{Literal::Type::kDecimal, value};
        fail("unsupported datatype <" + type.value + ">");
      }
      return Literal{Literal::Type::kString, std::move(value)};
    }
    if (is_digit(c) || c == '+' || c == '-' || (c == '.' && is_digit(peek(1)))) {
      const std::size_t start = pos_;
      if (c == '+' || c == '-') ++pos_;
      while (is_digit(peek())) ++pos_;
      bool decimal = false;
      if (peek() == '.' && is_digit(peek(1))) {
        decimal = true;
        ++pos_;
        while (is_digit(peek())) ++pos_;
      }
      if (peek() == 'e' || peek() == 'E') fail("double literals are not supported");
      std::string lexical(text_.substr(start, pos_ - start));
      if (lexical == "+" || lexical == "-") fail("malformed number");
      return Literal{decimal ? Literal::Type::kDecimal : Literal::Type::kInteger,
                     std::move(lexical)};
    }
    if (keyword_boolean()) fail("boolean literals are not supported");
    return iri();
  }

  bool keyword_boolean() const {
    return text_.substr(pos_, 4) == "true" || text_.substr(pos_, 5) == "false";
  }

  Iri verb() {
    skip_ws();
    if (peek() == 'a') {
      const char next = peek(1);
      if (next == ' ' || next == '\t' || next == '\n' || next == '\r' || next == '<' ||
          next == '"') {
        ++pos_;
        return vocab::rdf("type");
      }
    }
    return iri();
  }

  void statement() {
    const Iri subject = iri();
    while (true) {
      const Iri predicate = verb();
      while (true) {
        Object obj = object();
        graph_.add(subject, predicate, std::move(obj));
        skip_ws();
        if (peek() != ',') break;
        ++pos_;
      }
      skip_ws();
      if (peek() == ';') {
        while (peek() == ';') {
          ++pos_;
          skip_ws();
        }
        if (peek() == '.') break;
        continue;
      }
      break;
    }
    expect('.');
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  GraphDocument graph_;
};

}  // namespace

Literal Literal::string(std::string value) { return {Type::kString, std::move(value)}; }

Literal Literal::integer(std::int64_t value) { return {Type::kInteger, std::to_string(value)}; }

Literal Literal::decimal(double value, int digits) {
  digits = std::max(digits, 1);
  std::string text = fmt::format("{:.{}f}", value, digits);
  if (text.front() == '-' && text.find_first_not_of("-0.") == std::string::npos) text.erase(0, 1);
  return {Type::kDecimal, std::move(text)};
}

bool is_valid_iri(std::string_view iri) {
  const auto colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0 || !is_alpha(iri.front())) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    const char c = iri[i];
    if (!(is_alpha(c) || is_digit(c) || c == '+' || c == '-' || c == '.')) return false;
  }
  return std::none_of(iri.begin(), iri.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u <= 0x20 || u == 0x7F || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' ||
           c == '|' || c == '^' || c == '`' || c == '\\';
  });
}

void GraphDocument::add_prefix(const std::string& prefix, const std::string& namespace_iri) {
  if (!is_prefix_label(prefix)) {
    throw Error(ErrorCode::kInvalidIri, fmt::format("invalid prefix label '{}'", prefix));
  }
  if (!is_valid_iri(namespace_iri)) {
    throw Error(ErrorCode::kInvalidIri, fmt::format("invalid namespace IRI <{}>", namespace_iri));
  }
  prefixes_[prefix] = namespace_iri;
}

void GraphDocument::add(Triple triple) {
  auto check = [](const Iri& iri) {
    if (!is_valid_iri(iri.value)) {
      throw Error(ErrorCode::kInvalidIri, fmt::format("invalid IRI <{}>", iri.value));
    }
  };
  check(triple.subject);
  check(triple.predicate);
  if (const auto* i = std::get_if<Iri>(&triple.object)) check(*i);
  triples_.insert(std::move(triple));
}

void GraphDocument::add(const Iri& subject, const Iri& predicate, Object object) {
  add(Triple{subject, predicate, std::move(object)});
}

Iri GraphDocument::expand(std::string_view curie) const {
  const auto colon = curie.find(':');
  if (colon != std::string_view::npos) {
    const auto it = prefixes_.find(std::string(curie.substr(0, colon)));
    if (it != prefixes_.end()) return Iri{it->second + std::string(curie.substr(colon + 1))};
  }
  throw Error(ErrorCode::kInvalidIri, fmt::format("cannot expand '{}'", curie));
}

std::string serialize_turtle(const GraphDocument& graph) {
  const TermWriter writer(graph.prefixes());
  std::string out;
  for (const auto& [prefix, ns] : graph.prefixes()) {
    out += fmt::format("@prefix {}: <{}> .\n", prefix, ns);
  }
  const Iri rdf_type = vocab::rdf("type");
  const Iri* subject = nullptr;
  const Iri* predicate = nullptr;
  for (const auto& triple : graph.triples()) {
    if (!subject || *subject != triple.subject) {
      if (subject) out += " .\n";
      out += "\n";
      out += writer.iri(triple.subject);
      out += " ";
      subject = &triple.subject;
      predicate = nullptr;
    }
    if (predicate && *predicate == triple.predicate) {
      out += " ,\n        ";
    } else {
      if (predicate) out += " ;\n    ";
      out += triple.predicate == rdf_type ? std::string("a") : writer.iri(triple.predicate);
      out += " ";
      predicate = &triple.predicate;
    }
    out += writer.object(triple.object);
  }
  if (subject) out += " .\n";
  return out;
}

GraphDocument parse_turtle(std::string_view text) { return TurtleReader(text).read(); }

namespace vocab {
Iri rdf(std::string_view local) { return Iri{std::string(kRdf) + std::string(local)}; }
Iri skos(std::string_view local) { return Iri{std::string(kSkos) + std::string(local)}; }
Iri xsd(std::string_view local) { return Iri{std::string(kXsd) + std::string(local)}; }
}  // namespace vocab

}  // namespace sckg::rdf
