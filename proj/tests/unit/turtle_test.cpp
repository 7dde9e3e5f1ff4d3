#include <gtest/gtest.h>

#include <random>

#include "alignkit/turtle.hpp"
#include "support.hpp"

using namespace alignkit;
using namespace alignkit::testing;

TEST(Turtle, RoundTripRandomOntologies) {
  std::mt19937 rng(20240611);
  for (int i = 0; i < 60; ++i) {
    auto o = random_ontology(rng);
    auto text = serialize_turtle(o);
    auto back = parse_turtle(text);
    EXPECT_EQ(back, o) << text;
    EXPECT_EQ(serialize_turtle(back), text);
  }
}

TEST(Turtle, ParsesAbbreviations) {
  auto o = parse_turtle(R"(@prefix : <http://example.org/t#> .
:Country a owl:Class ; rdfs:label "Country", "Land" .
:France a :Country ;
  :population "67"^^xsd:integer .
:population a owl:DatatypeProperty .
)");
  ASSERT_TRUE(o.base_iri());
  EXPECT_EQ(o.base_iri()->str(), "http://example.org/t");
  Iri france("http://example.org/t#France");
  EXPECT_EQ(o.kind_of(france), EntityKind::Individual);
  EXPECT_EQ(o.labels_of(Iri("http://example.org/t#Country")).size(), 2u);
  EXPECT_TRUE(o.triples().count(
      Triple{france, Iri("http://example.org/t#population"), Literal("67", Datatype::Integer)}));
}

TEST(Turtle, ReportsPosition) {
  try {
    parse_turtle("@prefix : <http://example.org/t#> .\n:a a owl:Class .\n:b a \n");
    FAIL() << "expected TurtleError";
  } catch (const TurtleError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  EXPECT_THROW(parse_turtle(":a a owl:Class ."), TurtleError);
  EXPECT_THROW(parse_turtle("<http://x/a> a owl:Class"), TurtleError);
  EXPECT_THROW(parse_turtle("<http://x/a> <http://x/p> \"1.5\"^^xsd:integer ."), TurtleError);
}

TEST(Turtle, IllFormedOntologyIsAnError) {
  EXPECT_THROW(parse_turtle("<http://x/a> a owl:Class .\n<http://x/a> a owl:ObjectProperty .\n"),
               TurtleError);
}

TEST(Turtle, EmptyDocument) {
  auto o = parse_turtle("# nothing\n");
  EXPECT_TRUE(o.triples().empty());
  EXPECT_EQ(parse_turtle(serialize_turtle(o)), o);
}
