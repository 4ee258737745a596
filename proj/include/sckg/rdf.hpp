#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>

namespace sckg::rdf {

/// Absolute IRI (already prefix-expanded).
struct Iri {
  std::string value;

  auto operator<=>(const Iri&) const = default;
};

struct Literal {
  enum class Type { kString, kInteger, kDecimal };

  Type type = Type::kString;
  std::string lexical;

  static Literal string(std::string value);
  static Literal integer(std::int64_t value);
  /// Fixed-point rendering with `digits` fractional digits (at least one).
  static Literal decimal(double value, int digits);

  auto operator<=>(const Literal&) const = default;
};

using Object = std::variant<Iri, Literal>;

struct Triple {
  Iri subject;
  Iri predicate;
  Object object;

  auto operator<=>(const Triple&) const = default;
};

/// True for an absolute IRI: a scheme, a colon, and no whitespace, controls,
/// or any of <>"{}|^`\ .
bool is_valid_iri(std::string_view iri);

/// Prefix table plus a sorted, duplicate-free triple set.
class GraphDocument {
 public:
  /// Throws InvalidIri for a malformed namespace or prefix label.
  void add_prefix(const std::string& prefix, const std::string& namespace_iri);
  /// Throws InvalidIri when any IRI term is not absolute.
  void add(Triple triple);
  void add(const Iri& subject, const Iri& predicate, Object object);

  const std::map<std::string, std::string>& prefixes() const { return prefixes_; }
  const std::set<Triple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }

  /// Expands `prefix:local` against the declared prefixes; throws InvalidIri
  /// when the prefix is undeclared.
  Iri expand(std::string_view curie) const;

 private:
  std::map<std::string, std::string> prefixes_;
  std::set<Triple> triples_;
};

/// Deterministic Turtle: `@prefix` block (sorted by label), then one
/// statement block per subject in sorted order. UTF-8, LF line endings.
std::string serialize_turtle(const GraphDocument& graph);

/// Reads the Turtle subset this library writes, plus the usual variations
/// (PREFIX, single-quoted and long strings, typed literals, comments).
/// Blank nodes, collections, language tags and @base are rejected with a
/// positioned ParseError.
GraphDocument parse_turtle(std::string_view text);

namespace vocab {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kSkos = "http://www.w3.org/2004/02/skos/core#";

Iri rdf(std::string_view local);
Iri skos(std::string_view local);
Iri xsd(std::string_view local);
}  // namespace vocab

}  // namespace sckg::rdf
