#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <random>
#include <string>

#include "json.hpp"

#include "mmwp/scenario.hpp"

using namespace mmwp;
using nlohmann::json;

namespace {

json base_doc() {
  json doc;
  doc["schema_version"] = 1;
  doc["bounds"] = {{0.0, 0.0}, {30.0, 30.0}};
  doc["resolution_m"] = 1.0;
  doc["ue_height_m"] = 1.5;
  doc["gnb_mount_offset_m"] = 0.0;
  doc["pmr_height_band_m"] = {5.0, 35.0};
  doc["buildings"] = json::array();
  return doc;
}

json box_building(const std::string& id, double x0, double y0, double x1, double y1,
                  double h) {
  json b;
  b["id"] = id;
  b["footprint"] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  b["height_m"] = h;
  return b;
}

Scenario parse(const json& doc) { return parse_scenario_json(doc.dump(), "test"); }

}  // namespace

TEST_CASE("open field service grid") {
  json doc = base_doc();
  doc["bounds"] = {{0.0, 0.0}, {10.0, 10.0}};
  Scenario s = parse(doc);
  GridSet g = generate_service_grid(s);
  REQUIRE(g.size() == 100);
  CHECK(g.points[0].x() == doctest::Approx(0.5));
  CHECK(g.points[0].y() == doctest::Approx(0.5));
  CHECK(g.points[0].z() == doctest::Approx(1.5));
  // Row-major in y then x.
  CHECK(g.points[1].x() == doctest::Approx(1.5));
  CHECK(g.points[1].y() == doctest::Approx(0.5));
  CHECK(g.points[10].x() == doctest::Approx(0.5));
  CHECK(g.points[10].y() == doctest::Approx(1.5));
  CHECK(g.points.back().x() == doctest::Approx(9.5));
  CHECK(g.points.back().y() == doctest::Approx(9.5));
}

TEST_CASE("service grid skips building cells") {
  json doc = base_doc();
  doc["buildings"].push_back(box_building("B1", 10, 10, 20, 20, 25));
  Scenario s = parse(doc);
  GridSet g = generate_service_grid(s);
  CHECK(g.size() == 900 - 100);
  for (const Vec3& p : g.points) {
    const bool inside = p.x() > 10.0 && p.x() < 20.0 && p.y() > 10.0 && p.y() < 20.0;
    CHECK_FALSE(inside);
  }
}

TEST_CASE("gnb candidates walk the rooftop boundary") {
  json doc = base_doc();
  doc["gnb_mount_offset_m"] = 2.0;
  doc["buildings"].push_back(box_building("B1", 10, 10, 20, 20, 25));
  Scenario s = parse(doc);
  GridSet g = generate_gnb_candidates(s);
  REQUIRE(g.size() == 40);  // perimeter 40 m at 1 m spacing
  for (const Vec3& p : g.points) CHECK(p.z() == doctest::Approx(27.0));
  // Corners are candidates.
  bool corner = false;
  for (const Vec3& p : g.points)
    if (p.x() == doctest::Approx(10.0) && p.y() == doctest::Approx(10.0)) corner = true;
  CHECK(corner);
  REQUIRE(g.owner.size() == 40);
  for (int o : g.owner) CHECK(o == 0);
}

TEST_CASE("gnb candidate count scales with perimeter") {
  json doc = base_doc();
  doc["buildings"].push_back(box_building("B1", 2, 2, 9, 6, 20));   // 7x4
  doc["buildings"].push_back(box_building("B2", 14, 14, 20, 24, 30));  // 6x10
  Scenario s = parse(doc);
  GridSet g = generate_gnb_candidates(s);
  CHECK(g.size() == 2 * (7 + 4) + 2 * (6 + 10));
}

TEST_CASE("surface grid tiles walls and roof") {
  json doc = base_doc();
  doc["buildings"].push_back(box_building("B1", 10, 10, 20, 20, 10));
  Scenario s = parse(doc);
  GridSet g = generate_building_surface_grid(s, 1.0);
  REQUIRE(g.size() == 500);  // 4 walls x 100 + roof 100
  REQUIRE(g.normals.size() == 500);

  int plus_x = 0, roof = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3& n = g.normals[i];
    const Vec3& p = g.points[i];
    if (n.isApprox(Vec3(1, 0, 0))) {
      ++plus_x;
      CHECK(p.x() == doctest::Approx(20.0));
      CHECK(p.y() > 10.0);
      CHECK(p.y() < 20.0);
      CHECK(p.z() > 0.0);
      CHECK(p.z() < 10.0);
    }
    if (n.isApprox(Vec3(0, 0, 1))) {
      ++roof;
      CHECK(p.z() == doctest::Approx(10.0));
    }
    CHECK(n.norm() == doctest::Approx(1.0));
  }
  CHECK(plus_x == 100);
  CHECK(roof == 100);
}

TEST_CASE("surface grid rejects facets larger than every face") {
  json doc = base_doc();
  doc["buildings"].push_back(box_building("tiny", 10, 10, 12, 12, 2));
  Scenario s = parse(doc);
  CHECK_THROWS_WITH_AS(generate_building_surface_grid(s, 50.0),
                       doctest::Contains("tiny"), ScenarioError);
  CHECK_THROWS_AS(generate_building_surface_grid(s, 0.0), ScenarioError);
}

TEST_CASE("parser round trip keeps building order and heights") {
  json doc = base_doc();
  doc["bounds"] = {{0.0, 0.0}, {70.0, 70.0}};
  const double hs[] = {25, 20, 25, 35, 25, 20};
  for (int i = 0; i < 6; ++i)
    doc["buildings"].push_back(
        box_building("B" + std::to_string(i + 1), 2 + 11 * i, 5, 10 + 11 * i, 15, hs[i]));
  Scenario s = parse(doc);
  REQUIRE(s.buildings.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(s.buildings[i].id == "B" + std::to_string(i + 1));
    CHECK(s.buildings[i].height == hs[i]);
    CHECK(s.buildings[i].reflective);
  }
  CHECK(s.roof_mirrors);
}

TEST_CASE("reflective and roof_mirrors switches parse") {
  json doc = base_doc();
  doc["roof_mirrors"] = false;
  json b = box_building("B1", 10, 10, 20, 20, 10);
  b["reflective"] = false;
  doc["buildings"].push_back(b);
  Scenario s = parse(doc);
  CHECK_FALSE(s.roof_mirrors);
  CHECK_FALSE(s.buildings[0].reflective);
}

TEST_CASE("parse errors name the offending element") {
  CHECK_THROWS_WITH_AS(parse_scenario_json("{oops", "test"), doctest::Contains("test"),
                       ScenarioError);

  json doc = base_doc();
  doc.erase("resolution_m");
  CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("resolution_m"), ScenarioError);

  doc = base_doc();
  doc["schema_version"] = 2;
  CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("schema_version"), ScenarioError);

  doc = base_doc();
  doc["buildings"].push_back(box_building("B1", 10, 10, 20, 20, -1.0));
  CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("B1"), ScenarioError);

  doc = base_doc();
  doc["buildings"].push_back(box_building("dup", 2, 2, 5, 5, 10));
  doc["buildings"].push_back(box_building("dup", 10, 10, 20, 20, 10));
  CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("duplicate"), ScenarioError);

  doc = base_doc();
  json cw;
  cw["id"] = "cw";
  cw["footprint"] = {{10, 10}, {10, 20}, {20, 20}, {20, 10}};
  cw["height_m"] = 10;
  doc["buildings"].push_back(cw);
  CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("counter-clockwise"), ScenarioError);

  doc = base_doc();
  doc["buildings"].push_back(box_building("far", 10, 10, 40, 20, 10));
  CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("bounds"), ScenarioError);

  doc = base_doc();
  doc["buildings"].push_back(box_building("A", 5, 5, 15, 15, 10));
  doc["buildings"].push_back(box_building("B", 10, 10, 20, 20, 10));
  try {
    parse(doc);
    FAIL("overlap accepted");
  } catch (const ScenarioError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("A") != std::string::npos);
    CHECK(msg.find("B") != std::string::npos);
    CHECK(msg.find("overlap") != std::string::npos);
  }

  doc = base_doc();
  json two;
  two["id"] = "two";
  two["footprint"] = {{10, 10}, {20, 10}};
  two["height_m"] = 10;
  doc["buildings"].push_back(two);
  CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("3 vertices"), ScenarioError);

  doc = base_doc();
  json bow;
  bow["id"] = "bow";
  bow["footprint"] = {{10, 10}, {20, 20}, {20, 10}, {10, 20}};
  bow["height_m"] = 10;
  doc["buildings"].push_back(bow);
  CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("simple"), ScenarioError);

  doc = base_doc();
  doc["resolution_m"] = 0.0;
  CHECK_THROWS_AS(parse(doc), ScenarioError);

  doc = base_doc();
  doc["pmr_height_band_m"] = {10.0, 5.0};
  CHECK_THROWS_AS(parse(doc), ScenarioError);

  doc = base_doc();
  doc["bounds"] = {{0.0, 0.0}, {-5.0, 30.0}};
  CHECK_THROWS_AS(parse(doc), ScenarioError);
}

TEST_CASE("grid generation is deterministic") {
  json doc = base_doc();
  doc["buildings"].push_back(box_building("B1", 3.3, 4.4, 11.1, 13.7, 17.0));
  doc["buildings"].push_back(box_building("B2", 15.2, 18.9, 27.6, 24.1, 23.0));
  Scenario s = parse(doc);
  GridSet a = generate_service_grid(s), b = generate_service_grid(s);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a.points[i].cwiseEqual(b.points[i]).all());
  GridSet c1 = generate_gnb_candidates(s), c2 = generate_gnb_candidates(s);
  REQUIRE(c1.size() == c2.size());
  for (std::size_t i = 0; i < c1.size(); ++i)
    CHECK(c1.points[i].cwiseEqual(c2.points[i]).all());
}

TEST_CASE("service grid matches closed-form counting for random boxes") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    json doc = base_doc();
    doc["bounds"] = {{0.0, 0.0}, {20.0, 20.0}};
    std::vector<std::array<double, 4>> boxes;
    for (int b = 0; b < 3; ++b) {
      for (int attempt = 0; attempt < 50; ++attempt) {
        const double x0 = u(rng) * 14.0 + 0.5, y0 = u(rng) * 14.0 + 0.5;
        const double w = u(rng) * 4.0 + 1.0, h = u(rng) * 4.0 + 1.0;
        const double x1 = std::min(x0 + w, 19.5), y1 = std::min(y0 + h, 19.5);
        bool clash = false;
        for (const auto& o : boxes)
          if (x0 < o[2] + 0.1 && o[0] < x1 + 0.1 && y0 < o[3] + 0.1 && o[1] < y1 + 0.1)
            clash = true;
        if (clash) continue;
        boxes.push_back({x0, y0, x1, y1});
        doc["buildings"].push_back(
            box_building("R" + std::to_string(b), x0, y0, x1, y1, 10.0 + 10.0 * u(rng)));
        break;
      }
    }
    Scenario s = parse(doc);
    GridSet g = generate_service_grid(s);
    // Count centroids (i+0.5, j+0.5) covered by each box, axis by axis.
    auto cells_in = [](double lo, double hi) {
      // #integers i with lo <= i+0.5 <= hi
      return std::max(0, static_cast<int>(std::floor(hi - 0.5)) -
                             static_cast<int>(std::ceil(lo + 0.5)) + 2);
    };
    int removed = 0;
    for (const auto& o : boxes) removed += cells_in(o[0], o[2]) * cells_in(o[1], o[3]);
    CHECK(g.size() == static_cast<std::size_t>(400 - removed));
  }
}
