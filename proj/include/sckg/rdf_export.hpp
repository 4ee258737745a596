#pragma once

#include <set>
#include <span>
#include <string>
#include <utility>

#include "sckg/concepts.hpp"
#include "sckg/cooccur.hpp"
#include "sckg/corpus.hpp"
#include "sckg/palette.hpp"
#include "sckg/rdf.hpp"
#include "sckg/taxonomy.hpp"

namespace sckg {

/// IRIs minted under one project namespace (which should end in '/' or '#').
struct KgNamespace {
  std::string base = "http://example.org/sckg/";

  std::string scheme() const { return base + "scheme/subjects"; }
  std::string subjects() const { return base + "subject/"; }
  std::string artworks() const { return base + "artwork/"; }
  std::string cooccurrences() const { return base + "cooccurrence/"; }
  std::string palettes() const { return base + "palette/"; }
  std::string ontology() const { return base + "ontology#"; }
};

/// SKOS rendering: one ConceptScheme, one skos:Concept per tag at
/// `<base_iri><id>` with prefLabel and inScheme, skos:broader for levels 1-2,
/// skos:topConceptOf for level 0. Throws InvalidIri.
rdf::GraphDocument taxonomy_to_skos(const Taxonomy& t, const std::string& scheme_iri,
                                    const std::string& base_iri);

using ArtworkPalette = std::pair<ArtworkId, Palette>;

/// Number of triples each co-occurrence entry contributes.
inline constexpr std::size_t kCooccurrenceArity = 5;

/// Integrated graph. Concepts reuse their SKOS IRIs; every (concept, tag)
/// count becomes a reified node
///   cooc:<c>-<t> a sco:Cooccurrence ; sco:concept ; sco:cooccurringTag ;
///                sco:count ; sco:tagClass .
/// and every palette a node with up to five swatch nodes. Throws
/// UnknownConcept or UnknownArtwork.
rdf::GraphDocument build_kg(std::span<const SocialConcept> concepts,
                            std::span<const CooccurrenceProfile> profiles,
                            std::span<const ArtworkPalette> palettes,
                            const std::set<ArtworkId>& known_artworks,
                            const TagClassifier& classifier, const KgNamespace& ns);

}  // namespace sckg
