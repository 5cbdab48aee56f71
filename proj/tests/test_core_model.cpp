#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mzsim/building.hpp"
#include "mzsim/discretize.hpp"

using namespace mzsim;

namespace {

const Material kWood{0.15, 600.0, 1600.0};
const Material kPolystyrene{0.04, 25.0, 1400.0};
const Material kConcrete{1.75, 2400.0, 880.0};

// Single zone, one exterior wall, one crack. Smallest model that validates.
BuildingModel buildMinimalModel() {
  BuildingModel m;
  Zone z;
  z.name = "room";
  z.volume = 30.0;
  m.zones.push_back(z);

  Wall w;
  w.name = "facade";
  w.construction.layers = {{kConcrete, 0.2}};
  w.area = 10.0;
  w.side_in = 0;
  w.side_out = kExterior;
  m.walls.push_back(w);

  AirLink l;
  l.name = "crack";
  l.kind = LinkKind::Crack;
  l.aperture = 0.001;
  l.from = 0;
  l.to = kExterior;
  m.links.push_back(l);
  return m;
}

bool hasViolation(const std::vector<Violation>& v, const std::string& fragment) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) {
    return x.message.find(fragment) != std::string::npos;
  });
}

} // namespace

// ============================================================================
// Validation
// ============================================================================

TEST(Validation, MinimalModelIsClean) {
  EXPECT_TRUE(validate_building(buildMinimalModel()).empty());
}

TEST(Validation, ReportsUnknownZoneReference) {
  BuildingModel m = buildMinimalModel();
  m.walls[0].side_in = 99;
  auto v = validate_building(m);
  ASSERT_FALSE(v.empty());
  EXPECT_TRUE(hasViolation(v, "unknown zone"));
  EXPECT_EQ(v[0].component, "wall 'facade'");
}

TEST(Validation, ReportsCrackExponentOutOfRange) {
  BuildingModel m = buildMinimalModel();
  m.links[0].exponent = 0.3;
  EXPECT_TRUE(hasViolation(validate_building(m), "flow exponent"));
  m.links[0].exponent = 1.2;
  EXPECT_TRUE(hasViolation(validate_building(m), "flow exponent"));
  // Openings ignore the exponent entirely.
  m.links[0].kind = LinkKind::Opening;
  EXPECT_TRUE(validate_building(m).empty());
}

TEST(Validation, ReportsNonPositiveGeometry) {
  BuildingModel m = buildMinimalModel();
  m.zones[0].volume = 0.0;
  m.walls[0].area = -1.0;
  auto v = validate_building(m);
  EXPECT_TRUE(hasViolation(v, "volume must be positive"));
  EXPECT_TRUE(hasViolation(v, "area must be positive"));
}

TEST(Validation, ReportsSelfReferences) {
  BuildingModel m = buildMinimalModel();
  m.walls[0].side_out = 0; // same zone on both faces
  m.links[0].to = 0;       // link endpoints coincide
  auto v = validate_building(m);
  EXPECT_TRUE(hasViolation(v, "both sides face the same zone"));
  EXPECT_TRUE(hasViolation(v, "endpoints coincide"));
}

TEST(Validation, ReportsWallDetachedFromEveryZone) {
  BuildingModel m = buildMinimalModel();
  m.walls[0].side_in = kExterior;
  EXPECT_TRUE(hasViolation(validate_building(m), "both sides exterior"));
}

TEST(Validation, ReportsDuplicateNames) {
  BuildingModel m = buildMinimalModel();
  m.walls.push_back(m.walls[0]);
  EXPECT_TRUE(hasViolation(validate_building(m), "duplicate name 'facade'"));
}

TEST(Validation, ReportsBadMaterialAndFilms) {
  BuildingModel m = buildMinimalModel();
  m.walls[0].construction.layers[0].material.conductivity = 0.0;
  m.walls[0].h_ci = -1.0;
  m.walls[0].sw_absorptivity_out = 1.5;
  auto v = validate_building(m);
  EXPECT_TRUE(hasViolation(v, "conductivity must be positive"));
  EXPECT_TRUE(hasViolation(v, "film coefficients must be nonnegative"));
  EXPECT_TRUE(hasViolation(v, "absorptivity outside [0,1]"));
}

TEST(Validation, ReportsBadSchedules) {
  BuildingModel m = buildMinimalModel();
  m.links[0].opening_schedule[5] = 1.5;
  m.zones[0].internal_gains[3] = -10.0;
  auto v = validate_building(m);
  EXPECT_TRUE(hasViolation(v, "opening schedule outside [0,1]"));
  EXPECT_TRUE(hasViolation(v, "internal gains must be nonnegative"));
}

TEST(Validation, IsIdempotent) {
  BuildingModel m = buildMinimalModel();
  m.walls[0].area = -1.0;
  auto first = validate_building(m);
  auto second = validate_building(m);
  ASSERT_EQ(first.size(), second.size());
  for (size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].component, second[i].component);
    EXPECT_EQ(first[i].message, second[i].message);
  }
}

// ============================================================================
// Face geometry helpers
// ============================================================================

TEST(FaceHelpers, InsideFaceMirrorsOrientation) {
  Wall w;
  w.tilt = 90.0;
  w.azimuth = 30.0;
  EXPECT_DOUBLE_EQ(face_tilt(w, Face::Out), 90.0);
  EXPECT_DOUBLE_EQ(face_tilt(w, Face::In), 90.0);
  EXPECT_DOUBLE_EQ(face_azimuth(w, Face::Out), 30.0);
  EXPECT_DOUBLE_EQ(face_azimuth(w, Face::In), 210.0);

  // A floor slab: outside face looks down, inside face looks up.
  w.tilt = 180.0;
  EXPECT_DOUBLE_EQ(face_tilt(w, Face::Out), 180.0);
  EXPECT_DOUBLE_EQ(face_tilt(w, Face::In), 0.0);
}

TEST(FaceHelpers, AzimuthIsNormalizedTo360) {
  Wall w;
  w.azimuth = 350.0;
  EXPECT_DOUBLE_EQ(face_azimuth(w, Face::In), 170.0);
  w.azimuth = -90.0;
  EXPECT_DOUBLE_EQ(face_azimuth(w, Face::Out), 270.0);
}

TEST(FaceHelpers, SelectorsPickTheRightSide) {
  Wall w;
  w.side_in = 2;
  w.side_out = kExterior;
  w.h_ci = 3.0;
  w.h_ce = 15.0;
  w.h_ri = 5.0;
  w.h_re = 4.0;
  w.sw_absorptivity_in = 0.3;
  w.sw_absorptivity_out = 0.8;
  EXPECT_EQ(face_boundary(w, Face::In), 2);
  EXPECT_EQ(face_boundary(w, Face::Out), kExterior);
  EXPECT_DOUBLE_EQ(face_h_conv(w, Face::In), 3.0);
  EXPECT_DOUBLE_EQ(face_h_conv(w, Face::Out), 15.0);
  EXPECT_DOUBLE_EQ(face_h_rad(w, Face::Out), 4.0);
  EXPECT_DOUBLE_EQ(face_absorptivity(w, Face::Out), 0.8);
}

TEST(Zones, EffectiveAirCapacitanceDefaultsToAirMass) {
  Zone z;
  z.volume = 21.6;
  EXPECT_NEAR(z.effective_air_capacitance(), 1.2 * 21.6 * 1000.0, 1e-9);
  z.air_capacitance = 5.0e5;
  EXPECT_DOUBLE_EQ(z.effective_air_capacitance(), 5.0e5);
}

TEST(Schedules, ConstantFillsAllHours) {
  Schedule s = constant_schedule(0.25);
  for (double v : s) EXPECT_DOUBLE_EQ(v, 0.25);
}

// ============================================================================
// Wall discretization
// ============================================================================

TEST(Discretize, SingleLayerSingleNodeGivesThreeNodeChain) {
  WallConstruction c;
  c.layers = {{kConcrete, 0.2}};
  c.nodes_per_layer = 1;
  WallChain chain = discretize_wall(c);

  ASSERT_EQ(chain.node_count(), 3);
  EXPECT_EQ(chain.surface_in(), 0);
  EXPECT_EQ(chain.surface_out(), 2);

  // Massless surface nodes, all thermal mass on the core node.
  EXPECT_DOUBLE_EQ(chain.capacitance[0], 0.0);
  EXPECT_DOUBLE_EQ(chain.capacitance[2], 0.0);
  EXPECT_NEAR(chain.capacitance[1], 2400.0 * 880.0 * 0.2, 1e-6);

  // Each half-layer resistance is e/(2k).
  const double half_k = 1.75 / 0.1;
  EXPECT_NEAR(chain.conductance[0], half_k, 1e-9);
  EXPECT_NEAR(chain.conductance[1], half_k, 1e-9);
}

TEST(Discretize, SandwichResistanceMatchesHandSum) {
  // wood 1 cm / polystyrene 5 cm / wood 1 cm:
  // 0.01/0.15 + 0.05/0.04 + 0.01/0.15 = 1.3833 m2K/W.
  WallConstruction c;
  c.layers = {{kWood, 0.01}, {kPolystyrene, 0.05}, {kWood, 0.01}};
  const double expected = 0.01 / 0.15 + 0.05 / 0.04 + 0.01 / 0.15;
  EXPECT_NEAR(construction_resistance(c), expected, 1e-12);

  WallChain chain = discretize_wall(c);
  EXPECT_NEAR(chain.total_resistance(), expected, 1e-12);
}

TEST(Discretize, RefinementPreservesTotals) {
  WallConstruction coarse;
  coarse.layers = {{kWood, 0.01}, {kPolystyrene, 0.05}, {kWood, 0.01}};
  coarse.nodes_per_layer = 1;
  WallConstruction fine = coarse;
  fine.nodes_per_layer = 4;

  WallChain a = discretize_wall(coarse);
  WallChain b = discretize_wall(fine);
  EXPECT_GT(b.node_count(), a.node_count());
  EXPECT_NEAR(a.total_resistance(), b.total_resistance(), 1e-12);
  EXPECT_NEAR(a.total_capacitance(), b.total_capacitance(), 1e-9);

  double exact_cap = 0.0;
  for (const Layer& l : fine.layers)
    exact_cap += l.material.density * l.material.specific_heat * l.thickness;
  EXPECT_NEAR(b.total_capacitance(), exact_cap, 1e-9);
}

TEST(Discretize, SubMillimetreLayerAddsNoNode) {
  // A 0.5 mm membrane contributes its resistance in series and folds its
  // small mass into the neighbouring node instead of spawning one.
  WallConstruction with_film;
  with_film.layers = {{kConcrete, 0.2}, {{0.2, 1100.0, 1000.0}, 0.0005}};
  WallConstruction bare;
  bare.layers = {{kConcrete, 0.2}};

  WallChain a = discretize_wall(with_film);
  WallChain b = discretize_wall(bare);
  EXPECT_EQ(a.node_count(), b.node_count());
  EXPECT_NEAR(a.total_resistance(), b.total_resistance() + 0.0005 / 0.2, 1e-12);
  const double film_mass = 1100.0 * 1000.0 * 0.0005;
  EXPECT_NEAR(a.total_capacitance(), b.total_capacitance() + film_mass, 1e-9);
}

TEST(Discretize, RejectsDegenerateConstructions) {
  WallConstruction empty;
  EXPECT_THROW(discretize_wall(empty), std::invalid_argument);

  WallConstruction bad;
  bad.layers = {{kWood, -0.01}};
  EXPECT_THROW(discretize_wall(bad), std::invalid_argument);

  WallConstruction zero_k;
  zero_k.layers = {{{0.0, 600.0, 1600.0}, 0.01}};
  EXPECT_THROW(discretize_wall(zero_k), std::invalid_argument);
}

// ============================================================================
// U-value
// ============================================================================

TEST(UValue, IncludesBothFilms) {
  Wall w;
  w.construction.layers = {{kWood, 0.01}, {kPolystyrene, 0.05}, {kWood, 0.01}};
  w.h_ci = 8.0;
  w.h_ce = 25.0;
  const double r = 0.01 / 0.15 + 0.05 / 0.04 + 0.01 / 0.15;
  EXPECT_NEAR(wall_u_value(w), 1.0 / (r + 1.0 / 8.0 + 1.0 / 25.0), 1e-9);
  EXPECT_NEAR(wall_u_value(w), 0.646, 5e-4);
}

TEST(UValue, UnitSlabWithoutFilmsIsUnity) {
  Wall w;
  w.construction.layers = {{{1.0, 1000.0, 1000.0}, 1.0}};
  w.h_ci = 0.0;
  w.h_ce = 0.0;
  EXPECT_NEAR(wall_u_value(w), 1.0, 1e-12);
}

TEST(UValue, ZeroFilmDropsThatTerm) {
  Wall w;
  w.construction.layers = {{kConcrete, 0.2}};
  w.h_ci = 8.0;
  w.h_ce = 0.0;
  EXPECT_NEAR(wall_u_value(w), 1.0 / (0.2 / 1.75 + 0.125), 1e-9);
}

TEST(UValue, DecreasesWithThickness) {
  Wall w;
  w.construction.layers = {{kPolystyrene, 0.02}};
  double prev = wall_u_value(w);
  for (double e : {0.04, 0.08, 0.16}) {
    w.construction.layers[0].thickness = e;
    double u = wall_u_value(w);
    EXPECT_LT(u, prev);
    prev = u;
  }
}
