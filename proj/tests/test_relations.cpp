#include <doctest.h>

#include <random>

#include "egoscene/relations.hpp"
#include "oracles.hpp"

using namespace egoscene;

namespace {

using K = RelationKind;

Box3D box(SegmentId id, int x1, int y1, int x2, int y2, double z1, double z2) {
  Box3D b;
  b.id = id;
  b.x1 = x1;
  b.y1 = y1;
  b.x2 = x2;
  b.y2 = y2;
  b.z_min = z1;
  b.z_max = z2;
  b.z_mean = (z1 + z2) / 2;
  b.centroid_y = (y1 + y2) / 2.0;
  return b;
}

struct LatticeBox {
  int x1, w, y1, h, z1, t;
};

Box3D to_box(SegmentId id, const LatticeBox& l, double unit) {
  return box(id, l.x1, l.y1, l.x1 + l.w, l.y1 + l.h, l.z1 * unit, (l.z1 + l.t) * unit);
}

std::optional<K> oracle_of(const LatticeBox& a, const LatticeBox& b, double unit,
                           const RelationThresholds& t) {
  return oracle::classify(oracle::scan_axis(a.x1, a.x1 + a.w, b.x1, b.x1 + b.w),
                          oracle::scan_axis(a.y1, a.y1 + a.h, b.y1, b.y1 + b.h),
                          oracle::scan_depth(a.z1, a.z1 + a.t, b.z1, b.z1 + b.t, unit), t);
}

}  // namespace

TEST_SUITE("relations") {

TEST_CASE("depth-separated overlapping boxes") {
  const Box3D a = box(0, 0, 0, 10, 10, 500, 900);
  const Box3D b = box(1, 0, 0, 10, 10, 1000, 2000);
  CHECK(relate(a, b, {}) == K::kInFrontOf);
  CHECK(relate(b, a, {}) == K::kBehind);
}

TEST_CASE("stacked boxes") {
  const Box3D a = box(0, 10, 10, 20, 20, 1000, 1200);
  const Box3D b = box(1, 10, 20, 20, 40, 1000, 1200);
  for (double tol : {0.0, 1.0, 5.0}) {
    RelationThresholds t;
    t.touch_tol = tol;
    CHECK(relate(a, b, t) == K::kOn);
    CHECK(relate(b, a, t) == K::kUnder);
  }
}

TEST_CASE("distant boxes are unrelated") {
  const Box3D a = box(0, 0, 0, 10, 10, 1000, 1200);
  const Box3D b = box(1, 100, 100, 110, 110, 1000, 1200);
  CHECK_FALSE(relate(a, b, {}).has_value());
  CHECK_FALSE(relate(b, a, {}).has_value());
}

TEST_CASE("rules beyond the examples") {
  const RelationThresholds t;
  // Clear vertical gap: above and under.
  CHECK(relate(box(0, 0, 0, 10, 10, 1000, 1100), box(1, 0, 30, 10, 40, 1000, 1100), t) == K::kAbove);
  CHECK(relate(box(0, 0, 30, 10, 40, 1000, 1100), box(1, 0, 0, 10, 10, 1000, 1100), t) == K::kUnder);
  // Side by side within the tolerance.
  CHECK(relate(box(0, 0, 0, 10, 10, 1000, 1100), box(1, 13, 0, 23, 10, 1000, 1100), t) == K::kNextTo);
  // Side by side beyond the tolerance.
  CHECK_FALSE(relate(box(0, 0, 0, 10, 10, 1000, 1100), box(1, 16, 0, 26, 10, 1000, 1100), t));
  // Too far apart in depth for contact.
  CHECK_FALSE(relate(box(0, 0, 0, 10, 10, 1000, 1100), box(1, 0, 10, 10, 20, 1300, 1400), t));
  // Containment in all three axes.
  CHECK_FALSE(relate(box(0, 0, 0, 20, 20, 1000, 2000), box(1, 5, 5, 10, 10, 1200, 1300), t));
  CHECK_THROWS_AS(relate(box(3, 0, 0, 1, 1, 0, 1), box(3, 0, 0, 1, 1, 0, 1), t), Error);
}

TEST_CASE("relate matches the lattice oracle on a random sample") {
  std::mt19937 rng(41);
  std::uniform_int_distribution<int> pos(0, 19), size_idx(0, 5), zpos(0, 4), thick(0, 2);
  const int sizes[] = {1, 2, 3, 5, 8, 13};
  const RelationThresholds sets[] = {{}, {0.0, 0.0, 0.0}, {2.0, 100.0, 0.5}, {3.0, 250.0, 1.0}};
  int mismatches = 0;
  for (const auto& t : sets)
    for (int i = 0; i < 20000; ++i) {
      const LatticeBox la{pos(rng), sizes[size_idx(rng)], pos(rng), sizes[size_idx(rng)], zpos(rng), thick(rng)};
      const LatticeBox lb{pos(rng), sizes[size_idx(rng)], pos(rng), sizes[size_idx(rng)], zpos(rng), thick(rng)};
      const Box3D a = to_box(0, la, 100.0), b = to_box(1, lb, 100.0);
      if (relate(a, b, t) != oracle_of(la, lb, 100.0, t)) ++mismatches;
    }
  CHECK(mismatches == 0);
}

TEST_CASE("inverse consistency on random boxes") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> c(0, 40), z(0, 3000), len(1, 20);
  for (int i = 0; i < 20000; ++i) {
    const int ax = c(rng), ay = c(rng), bx = c(rng), by = c(rng);
    const double az = z(rng), bz = z(rng);
    const Box3D a = box(0, ax, ay, ax + len(rng), ay + len(rng), az, az + z(rng) / 10);
    const Box3D b = box(1, bx, by, bx + len(rng), by + len(rng), bz, bz + z(rng) / 10);
    const auto ab = relate(a, b, {});
    const auto ba = relate(b, a, {});
    REQUIRE(ab.has_value() == ba.has_value());
    if (ab) REQUIRE(are_inverse(*ab, *ba));
  }
}

TEST_CASE("inverse table") {
  CHECK(inverse(K::kInFrontOf) == K::kBehind);
  CHECK(inverse(K::kBehind) == K::kInFrontOf);
  CHECK(inverse(K::kOn) == K::kUnder);
  CHECK(inverse(K::kAbove) == K::kUnder);
  CHECK(inverse(K::kUnder) == K::kAbove);
  CHECK(inverse(K::kNextTo) == K::kNextTo);
  CHECK(are_inverse(K::kUnder, K::kOn));
  CHECK(are_inverse(K::kOn, K::kUnder));
  CHECK_FALSE(are_inverse(K::kOn, K::kAbove));
  for (auto k : {K::kInFrontOf, K::kBehind, K::kOn, K::kAbove, K::kUnder, K::kNextTo})
    CHECK(relation_kind_from_string(to_string(k)) == k);
  CHECK_FALSE(relation_kind_from_string("beside"));
}

TEST_CASE("growing the touch tolerance keeps contact relations") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> c(0, 30), len(1, 15), z(900, 1500);
  for (int i = 0; i < 20000; ++i) {
    const int ax = c(rng), ay = c(rng), bx = c(rng), by = c(rng);
    const double az = z(rng), bz = z(rng);
    const Box3D a = box(0, ax, ay, ax + len(rng), ay + len(rng), az, az + 100);
    const Box3D b = box(1, bx, by, bx + len(rng), by + len(rng), bz, bz + 100);
    RelationThresholds lo, hi;
    lo.touch_tol = 2;
    hi.touch_tol = 6;
    const auto small = relate(a, b, lo);
    if (small == K::kOn || small == K::kNextTo) {
      // The pair stays in contact, possibly with b resting on a instead.
      const auto big = relate_pair(a, b, hi);
      REQUIRE(big.has_value());
      const bool contact = big->first == K::kOn || big->first == K::kNextTo || big->second == K::kOn;
      REQUIRE(contact);
    }
  }
}

TEST_CASE("threshold validation") {
  CHECK_NOTHROW(RelationThresholds{}.validate());
  CHECK_THROWS_AS((RelationThresholds{-1.0, 150.0, 0.3}.validate()), Error);
  CHECK_THROWS_AS((RelationThresholds{5.0, 150.0, 1.5}.validate()), Error);
}

TEST_CASE("build_box3d takes the bbox depth interval") {
  Segment seg;
  seg.id = 4;
  seg.polygon = {{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  seg.bbox = {0, 0, 10, 10};
  const DepthMap flat(12, 12, DepthValue{1000});
  const Box3D b = build_box3d(seg, flat);
  CHECK(b.id == 4);
  CHECK(b.z_min == 1000.0);
  CHECK(b.z_max == 1000.0);
  CHECK(b.centroid_y == doctest::Approx(5.0));

  DepthMap ramp(11, 11);
  for (int y = 0; y < 11; ++y)
    for (int x = 0; x < 11; ++x) ramp.at(x, y) = static_cast<DepthValue>(1000 + 100 * x);
  const Box3D r = build_box3d(seg, ramp);
  CHECK(r.z_max == 2000.0);
  CHECK(std::abs(r.z_min - 1000.0) <= 1.0);

  const DepthMap zeros(12, 12, DepthValue{0});
  CHECK_THROWS_AS(build_box3d(seg, zeros), Error);
}

TEST_CASE("adjacency matrices") {
  const RelationThresholds t;
  SUBCASE("single region") {
    const std::vector<FieldBox> boxes = {{box(0, 0, 0, 10, 10, 1000, 1100), DirectionField::kLeft}};
    const auto adj = build_adjacency(boxes, t);
    REQUIRE(adj[0].size() == 1);
    CHECK_FALSE(adj[0].cell(0, 0));
    CHECK(adj[1].size() == 0);
    CHECK(adj[2].size() == 0);
  }
  SUBCASE("stacked pair") {
    const std::vector<FieldBox> boxes = {
        {box(7, 10, 20, 20, 40, 1000, 1200), DirectionField::kRight},
        {box(2, 10, 10, 20, 20, 1000, 1200), DirectionField::kRight}};
    const auto adj = build_adjacency(boxes, t);
    const FieldAdjacency& right = adj[2];
    CHECK(right.field() == DirectionField::kRight);
    CHECK(right.region_ids() == std::vector<SegmentId>{2, 7});
    CHECK(right.cell(0, 1) == K::kOn);
    CHECK(right.cell(1, 0) == K::kUnder);
    REQUIRE(right.relations().size() == 1);
    CHECK(right.relations()[0] == Relation{K::kOn, 2, 7});
    const std::vector<SegmentId> drop = {7};
    CHECK(right.without(drop).relations().empty());
  }
  SUBCASE("mutually distant") {
    const std::vector<FieldBox> boxes = {
        {box(0, 0, 0, 10, 10, 1000, 1100), DirectionField::kFront},
        {box(1, 50, 50, 60, 60, 1000, 1100), DirectionField::kFront},
        {box(2, 100, 100, 110, 110, 1000, 1100), DirectionField::kFront}};
    const auto adj = build_adjacency(boxes, t);
    CHECK(adj[1].size() == 3);
    CHECK(adj[1].relations().empty());
  }
  SUBCASE("pairs across fields are not related") {
    const std::vector<FieldBox> boxes = {
        {box(0, 10, 10, 20, 20, 1000, 1200), DirectionField::kLeft},
        {box(1, 10, 20, 20, 40, 1000, 1200), DirectionField::kFront}};
    const auto adj = build_adjacency(boxes, t);
    CHECK(adj[0].relations().empty());
    CHECK(adj[1].relations().empty());
  }
}

TEST_CASE("ground and background") {
  std::vector<Box3D> boxes(3);
  const double cy[] = {100, 400, 250};
  const double zm[] = {900, 3000, 1500};
  for (int i = 0; i < 3; ++i) {
    boxes[i].id = static_cast<SegmentId>(i + 10);
    boxes[i].centroid_y = cy[i];
    boxes[i].z_mean = zm[i];
  }
  const auto gb = detect_ground_background(boxes);
  CHECK(gb.ground == 11);
  CHECK(gb.background == 11);
  boxes[1].z_mean = 1000;
  CHECK(detect_ground_background(boxes).background == 12);

  const std::vector<Box3D> single = {boxes[0]};
  const auto one = detect_ground_background(single);
  CHECK(one.ground == 10);
  CHECK(one.background == 10);
  CHECK_THROWS_AS(detect_ground_background(std::vector<Box3D>{}), Error);
}

}
