#include "sckg/rdf_export.hpp"

#include <map>

#include <fmt/format.h>

#include "sckg/error.hpp"

namespace sckg {
namespace {

using rdf::GraphDocument;
using rdf::Iri;
using rdf::Literal;

void require_iri(const std::string& iri, std::string_view what) {
  if (!rdf::is_valid_iri(iri)) {
    throw Error(ErrorCode::kInvalidIri, fmt::format("{} <{}> is not an absolute IRI", what, iri));
  }
}

Iri term(const KgNamespace& ns, std::string_view local) { return Iri{ns.ontology() + std::string(local)}; }

}  // namespace

GraphDocument taxonomy_to_skos(const Taxonomy& t, const std::string& scheme_iri,
                               const std::string& base_iri) {
  require_iri(scheme_iri, "scheme");
  require_iri(base_iri + "0", "concept base");

  GraphDocument g;
  g.add_prefix("skos", std::string(rdf::vocab::kSkos));
  g.add_prefix("subj", base_iri);

  const Iri scheme{scheme_iri};
  const Iri type = rdf::vocab::rdf("type");
  g.add(scheme, type, rdf::vocab::skos("ConceptScheme"));
  for (const auto& [id, tag] : t.tags()) {
    const Iri node{base_iri + std::to_string(to_int(id))};
    g.add(node, type, rdf::vocab::skos("Concept"));
    g.add(node, rdf::vocab::skos("prefLabel"), Literal::string(tag.name));
    g.add(node, rdf::vocab::skos("inScheme"), scheme);
    if (tag.parent_id) {
      g.add(node, rdf::vocab::skos("broader"),
            Iri{base_iri + std::to_string(to_int(*tag.parent_id))});
    } else {
      g.add(node, rdf::vocab::skos("topConceptOf"), scheme);
    }
  }
  return g;
}

GraphDocument build_kg(std::span<const SocialConcept> concepts,
                       std::span<const CooccurrenceProfile> profiles,
                       std::span<const ArtworkPalette> palettes,
                       const std::set<ArtworkId>& known_artworks, const TagClassifier& classifier,
                       const KgNamespace& ns) {
  require_iri(ns.scheme(), "scheme");
  GraphDocument g;
  g.add_prefix("skos", std::string(rdf::vocab::kSkos));
  g.add_prefix("xsd", std::string(rdf::vocab::kXsd));
  g.add_prefix("sco", ns.ontology());
  g.add_prefix("subj", ns.subjects());
  g.add_prefix("art", ns.artworks());
  g.add_prefix("cooc", ns.cooccurrences());
  g.add_prefix("pal", ns.palettes());

  const Iri type = rdf::vocab::rdf("type");
  const Iri scheme{ns.scheme()};
  g.add(scheme, type, rdf::vocab::skos("ConceptScheme"));

  auto subject_iri = [&](TagId id) { return Iri{ns.subjects() + std::to_string(to_int(id))}; };

  std::map<TagId, const SocialConcept*> by_id;
  for (const auto& c : concepts) {
    by_id.emplace(c.tag_id, &c);
    const Iri node = subject_iri(c.tag_id);
    g.add(node, type, rdf::vocab::skos("Concept"));
    g.add(node, type, term(ns, "SocialConcept"));
    g.add(node, rdf::vocab::skos("prefLabel"), Literal::string(c.name));
    g.add(node, rdf::vocab::skos("inScheme"), scheme);
    g.add(node, term(ns, "area"), Literal::string(c.area));
  }

  for (const auto& p : profiles) {
    if (!by_id.contains(p.social_concept.tag_id)) {
      throw Error(ErrorCode::kUnknownConcept,
                  fmt::format("profile for {} \"{}\" has no matching concept",
                              to_int(p.social_concept.tag_id), p.social_concept.name));
    }
    const Iri concept_iri = subject_iri(p.social_concept.tag_id);
    g.add(concept_iri, term(ns, "matchCount"), Literal::integer(p.n_matches));
    for (const auto& [tag, count] : p.counts) {
      const Iri node{fmt::format("{}{}-{}", ns.cooccurrences(), to_int(p.social_concept.tag_id), to_int(tag))};
      g.add(node, type, term(ns, "Cooccurrence"));
      g.add(node, term(ns, "concept"), concept_iri);
      g.add(node, term(ns, "cooccurringTag"), subject_iri(tag));
      g.add(node, term(ns, "count"), Literal::integer(count));
      const char* cls = "Other";
      switch (classifier.classify_or_other(tag)) {
        case TagClass::kPhysicalObject: cls = "PhysicalObject"; break;
        case TagClass::kAction: cls = "Action"; break;
        case TagClass::kOther: break;
      }
      g.add(node, term(ns, "tagClass"), term(ns, cls));
    }
  }

  for (const auto& [artwork, palette] : palettes) {
    if (!known_artworks.contains(artwork)) {
      throw Error(ErrorCode::kUnknownArtwork,
                  fmt::format("palette refers to unknown artwork {}", to_int(artwork)));
    }
    const Iri art{ns.artworks() + std::to_string(to_int(artwork))};
    const Iri node{ns.palettes() + std::to_string(to_int(artwork))};
    g.add(art, type, term(ns, "Artwork"));
    g.add(node, type, term(ns, "Palette"));
    g.add(node, term(ns, "paletteOf"), art);
    g.add(node, term(ns, "totalPixels"), Literal::integer(palette.total_pixels));
    for (std::size_t i = 0; i < palette.swatches.size(); ++i) {
      const auto& s = palette.swatches[i];
      const Iri swatch{fmt::format("{}{}-s{}", ns.palettes(), to_int(artwork), i + 1)};
      g.add(node, term(ns, "hasSwatch"), swatch);
      g.add(swatch, type, term(ns, "Swatch"));
      g.add(swatch, term(ns, "rank"), Literal::integer(static_cast<std::int64_t>(i + 1)));
      g.add(swatch, term(ns, "red"), Literal::integer(s.rgb.r));
      g.add(swatch, term(ns, "green"), Literal::integer(s.rgb.g));
      g.add(swatch, term(ns, "blue"), Literal::integer(s.rgb.b));
      g.add(swatch, term(ns, "pixelCount"), Literal::integer(s.pixel_count));
      g.add(swatch, term(ns, "percentage"), Literal::decimal(s.percentage, 4));
    }
  }
  return g;
}

}  // namespace sckg
