#include <doctest.h>

#include <nlohmann/json.hpp>

#include "riemann/geometry.hpp"
#include "support.hpp"

using namespace riemann;
using fixtures::error_of;

TEST_CASE("load_domain reads the canonical square") {
  const Domain d = load_domain_text(R"({"type":"polygon","vertices":[[0,0],[1,0],[1,1],[0,1]]})");
  REQUIRE(d.is_polygon());
  CHECK(d.polygon().vertices.size() == 4);
  CHECK(d.polygon().vertices[2] == Point{1, 1});
  CHECK(signed_area(d.polygon().vertices) == doctest::Approx(1.0));
}

TEST_CASE("load_domain reads the offset disc") {
  const Domain d = load_domain_text(R"({"type":"disc","center":[0.3,0],"radius":1})");
  REQUIRE(d.is_disc());
  CHECK(d.disc().center == Point{0.3, 0.0});
  CHECK(d.disc().radius == 1.0);
}

TEST_CASE("self-intersecting polygon is degenerate") {
  CHECK(error_of([] {
          load_domain_text(R"({"type":"polygon","vertices":[[0,0],[1,1],[1,0],[0,1]]})");
        }) == ErrorCode::DegenerateGeometry);
}

TEST_CASE("malformed specs") {
  const char* bad[] = {
      R"({"type":"polygon","vertices":[[0,0],[1,0]]})",
      R"({"type":"hexagon"})",
      R"({"type":"disc","center":[0,0]})",
      R"({"type":"disc","center":[0,0],"radius":"one"})",
      R"({"type":"polygon","vertices":[[0,0],[1],[1,1]]})",
      "not json at all",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    const auto code = error_of([&] { load_domain_text(text); });
    REQUIRE(code.has_value());
    CHECK((*code == ErrorCode::MalformedSpec || *code == ErrorCode::DegenerateGeometry));
  }
  CHECK(error_of([] { make_disc({0, 0}, 0.0); }) == ErrorCode::DegenerateGeometry);
  CHECK(error_of([] { make_disc({0, 0}, -1.0); }) == ErrorCode::DegenerateGeometry);
  CHECK(error_of([] { make_polygon({{0, 0}, {1, 0}, {2, 0}}); }) == ErrorCode::DegenerateGeometry);
  CHECK(error_of([] { load_domain_file("/nonexistent/domain.json"); }) == ErrorCode::MalformedSpec);
}

TEST_CASE("clockwise polygon is degenerate") {
  CHECK(error_of([] { make_polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}); }) == ErrorCode::DegenerateGeometry);
}

TEST_CASE("normalize_origin keeps a disc that already contains 0") {
  const Domain d = normalize_origin(fixtures::offset_disc());
  CHECK(d.translation == Point{0.0, 0.0});
  CHECK(d.disc().center == Point{0.3, 0.0});
}

TEST_CASE("normalize_origin moves the centroid to 0") {
  const Domain d = normalize_origin(make_polygon({{2, 2}, {3, 2}, {3, 3}, {2, 3}}));
  CHECK(d.translation.real() == doctest::Approx(-2.5));
  CHECK(d.translation.imag() == doctest::Approx(-2.5));
  CHECK(contains(d, {0.0, 0.0}));
  CHECK(d.to_original({0.0, 0.0}) == Point{2.5, 2.5});
}

TEST_CASE("normalize_origin falls back to a grid scan when the centroid is outside") {
  const Domain thin_l = make_polygon({{0, 0}, {3, 0}, {3, 0.2}, {0.2, 0.2}, {0.2, 3}, {0, 3}});
  // The centroid is near (0.82, 0.82), in the notch.
  CHECK_FALSE(contains(thin_l, {0.824, 0.824}));
  CHECK_FALSE(contains(thin_l, {0.0, 0.0}));
  const Domain d = normalize_origin(thin_l);
  CHECK(contains(d, {0.0, 0.0}));
  CHECK(contains(thin_l, -d.translation));
}

TEST_CASE("contains") {
  const Domain square = make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(contains(square, {0.5, 0.5}));
  CHECK_FALSE(contains(square, {1.0, 0.5}));
  CHECK_FALSE(contains(square, {0.0, 0.0}));
  CHECK_FALSE(contains(square, {0.5, 0.0}));
  CHECK_FALSE(contains(square, {1.5, 0.5}));
  CHECK(contains(fixtures::offset_disc(), {1.2, 0.0}));
  CHECK_FALSE(contains(fixtures::offset_disc(), {1.3, 0.0}));
  CHECK_FALSE(contains(fixtures::unit_disc(), {1.0, 0.0}));
}

TEST_CASE("contains on grazing rays") {
  // Rays through vertices of a diamond must not double count.
  const Domain diamond = make_polygon({{0, -1}, {1, 0}, {0, 1}, {-1, 0}});
  CHECK(contains(diamond, {0.0, 0.0}));
  CHECK(contains(diamond, {-0.5, 0.0}));
  CHECK_FALSE(contains(diamond, {-1.5, 0.0}));
  CHECK_FALSE(contains(diamond, {0.0, 1.0}));
  CHECK_FALSE(contains(diamond, {0.5, 0.5}));
}

TEST_CASE("segment predicates") {
  CHECK(segments_intersect({0, 0}, {1, 1}, {0, 1}, {1, 0}));
  CHECK(segments_intersect({0, 0}, {1, 0}, {1, 0}, {2, 1}));
  CHECK(segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));
  CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));
  CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
  CHECK(on_segment({0, 0}, {2, 2}, {1, 1}));
  CHECK_FALSE(on_segment({0, 0}, {2, 2}, {3, 3}));
  CHECK(segment_meets_box({-1, 0.5}, {2, 0.5}, {0, 0}, {1, 1}));
  CHECK(segment_meets_box({0.2, 0.2}, {0.3, 0.3}, {0, 0}, {1, 1}));
  CHECK_FALSE(segment_meets_box({2, 2}, {3, 3}, {0, 0}, {1, 1}));
}

TEST_CASE("to_json round trip in original coordinates") {
  const Domain d = normalize_origin(make_polygon({{2, 2}, {3, 2}, {3, 3}, {2, 3}}));
  const nlohmann::json j = to_json(d);
  const Domain back = load_domain(j);
  REQUIRE(back.is_polygon());
  CHECK(back.polygon().vertices[0] == Point{2, 2});
  CHECK(j.at("translation")[0].get<double>() == doctest::Approx(-2.5));
}
