#include "support.hpp"
#include "voxsim/rcc.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace voxsim;
using vtest::place;

namespace {

const char* kCubeVoxicon = R"(voxicon/1
object cube {
  head box
  axis top +Y
  dimensions 1 1 1
  habitat rest {
    orient top any
    support rest
  }
}
)";

Scene cube_scene() {
  static const auto v = std::make_shared<const Voxicon>(load_voxicon(kCubeVoxicon));
  return Scene(v);
}

double bottom(const Scene& s, const std::string& id) { return world_region(s, id).hull.bounds().lo.y(); }

// Table top height from the fixture: center plus half the default height.
double table_top(const Scene& s) {
  return s.instance("table-1").pose.position.y() + 0.5 * s.voxeme_of("table-1").default_dimensions.y();
}

}  // namespace

TEST(Scene, DefaultAgentExists) {
  Scene s = vtest::empty_scene();
  ASSERT_TRUE(s.is_agent("agent"));
  EXPECT_TRUE(s.instances().empty());
}

TEST(Scene, UnitCubeRegion) {
  Scene s = place(cube_scene(), "c", "cube", Vec3::Zero());
  Aabb b = world_region(s, "c").hull.bounds();
  EXPECT_LT((b.lo - Vec3::Constant(-0.5)).norm(), 1e-12);
  EXPECT_LT((b.hi - Vec3::Constant(0.5)).norm(), 1e-12);
  Scene t = place(cube_scene(), "c", "cube", Vec3::Zero(), Quat::Identity(), Vec3(2, 1, 1));
  Aabb bt = world_region(t, "c").hull.bounds();
  EXPECT_NEAR(bt.lo.x(), -1.0, 1e-12);
  EXPECT_NEAR(bt.hi.x(), 1.0, 1e-12);
}

TEST(Scene, UnknownIdIsAnError) {
  try {
    world_region(vtest::empty_scene(), "nothing");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unknown_id);
  }
}

TEST(Scene, CupVoxelsAreCarved) {
  Scene s = vtest::stock_scene();
  RegionApprox cup = world_region(s, "cup-1");
  VoxelGrid solid = cup.voxels(false), carved = cup.voxels(true);
  EXPECT_LT(carved.count(), solid.count());
  // The carved cells are exactly the cavity's cells.
  VoxelGrid cavity = voxelize(*cup.cavity, std::nullopt, cup.resolution);
  EXPECT_EQ(solid.count() - carved.count(), cavity.count());
}

TEST(Scene, VoxelVolumeConverges) {
  Scene s = vtest::stock_scene();
  // Coarse cells at a twentieth of the thinnest extent, then halved.
  for (const auto& [id, inst] : s.instances()) {
    RegionApprox r = world_region(s, id);
    double res = 2.0 * r.hull.half.minCoeff() / 20.0;
    double coarse = voxelize(r.hull, r.cavity, res).volume();
    double fine = voxelize(r.hull, r.cavity, res / 2.0).volume();
    EXPECT_LT(std::abs(fine - coarse) / fine, 0.05) << id;
    double exact = 0.0;
    for (const Box& b : r.material()) exact += b.volume();
    EXPECT_LT(std::abs(fine - exact) / exact, 0.05) << id;
  }
}

TEST(Scene, RigidMotionPreservesDistances) {
  Scene s = vtest::stock_scene();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-180, 180);
  auto base = region_at(s, "knife-1", Pose{}).hull.corners();
  for (int i = 0; i < 100; ++i) {
    Pose p{Vec3(u(rng), u(rng), u(rng)) / 100.0, quat_from_euler_deg(Vec3(u(rng), u(rng), u(rng)))};
    auto moved = region_at(s, "knife-1", p).hull.corners();
    for (int a = 0; a < 8; ++a)
      for (int b = a + 1; b < 8; ++b)
        EXPECT_NEAR((moved[a] - moved[b]).norm(), (base[a] - base[b]).norm(), 1e-9);
  }
}

TEST(Scene, TableTopSurface) {
  Scene s = vtest::stock_scene();
  SurfaceRegion top = select_surface(s, "table-1", SurfaceSelector::top());
  EXPECT_LT((top.normal - Vec3::UnitY()).norm(), 1e-12);
  EXPECT_NEAR(top.center.y(), table_top(s), 1e-12);
  EXPECT_NEAR(top.extents.x() * top.extents.y(), 1.2 * 0.8, 1e-12);
}

TEST(Scene, PlateTopIsBelowTheRim) {
  Scene s = vtest::stock_scene();
  SurfaceRegion top = select_surface(s, "plate-1", SurfaceSelector::top());
  EXPECT_LT(top.center.y(), world_region(s, "plate-1").hull.bounds().hi.y());
  EXPECT_GT(top.normal.y(), 0.999);
}

TEST(Scene, WallVerticalFace) {
  Scene s = vtest::stock_scene();
  Vec3 ball = s.instance("ball-1").pose.position;
  SurfaceRegion f = select_surface(s, "wall-1", SurfaceSelector::vertical_face(ball));
  EXPECT_LT(std::abs(f.normal.dot(Vec3::UnitY())), 0.01);
  // The wall stands at z = -1.5 and the ball is in front of it.
  EXPECT_GT(f.normal.z(), 0.99);
  EXPECT_NEAR(f.center.z(), -1.5 + 0.05, 1e-12);
}

TEST(Scene, SurfaceSelectorErrors) {
  Scene s = vtest::stock_scene();
  EXPECT_THROW(select_surface(s, "table-1", SurfaceSelector::interior_bottom()), Error);
  Scene flat = s.with_pose("wall-1", Pose{Vec3(0, 0.05, -1.5), quat_from_euler_deg(Vec3(90, 0, 0))});
  EXPECT_THROW(select_surface(flat, "wall-1", SurfaceSelector::vertical_face(Vec3::Zero())), Error);
  SurfaceRegion floor = select_surface(s, "cup-1", SurfaceSelector::interior_bottom());
  EXPECT_NEAR(floor.center.y(), 0.8 - 0.04, 1e-12);
}

TEST(Scene, SettleOntoEmptyFloor) {
  Scene s = place(cube_scene(), "c", "cube", Vec3(0, 3, 0));
  EXPECT_NEAR(bottom(settle(s, "c"), "c"), 0.0, 1e-12);
}

TEST(Scene, SettleIsAFixpointOnSupport) {
  Scene s = vtest::stock_scene();
  Scene again = settle(s, "cup-1");
  EXPECT_EQ(serialize(again), serialize(s));
}

TEST(Scene, SettleOntoTable) {
  Scene s = place(vtest::stock_scene(), "block-2", "block", Vec3(0.3, 2.0, -0.2));
  Scene settled = settle(s, "block-2");
  EXPECT_NEAR(bottom(settled, "block-2"), table_top(s), 1e-12);
  EXPECT_EQ(relation(settled, "block-2", "table-1"), RCC8Relation::EC);
  EXPECT_FALSE(interpenetrates(settled, "block-2", "table-1"));
}

TEST(Scene, SettleIsIdempotentAndLandsInContact) {
  Scene base = place(vtest::empty_scene(), "table-1", "table", Vec3(0, 0.375, 0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xz(-1.0, 1.0), h(1.0, 3.0), yaw(0, 360);
  for (int i = 0; i < 50; ++i) {
    Scene s = place(base, "b", "block", Vec3(xz(rng), h(rng), xz(rng)), quat_from_euler_deg(Vec3(0, yaw(rng), 0)));
    Scene once = settle(s, "b");
    Scene twice = settle(once, "b");
    EXPECT_EQ(serialize(twice), serialize(once));
    EXPECT_FALSE(interpenetrates(once, "b", "table-1"));
    double b = bottom(once, "b");
    if (std::abs(b) > 1e-9) {
      EXPECT_NEAR(b, 0.75, 1e-9);
      EXPECT_EQ(relation(once, "b", "table-1"), RCC8Relation::EC);
    }
  }
}

TEST(Scene, SettleRejectsAttachedInstances) {
  Scene s = vtest::stock_scene().attached("ball-1", "agent");
  EXPECT_THROW(settle(s, "ball-1"), Error);
}

TEST(Scene, PencilHabitat) {
  Scene s = vtest::stock_scene();
  EXPECT_TRUE(check_habitat(s, "pencil-1").empty());
  // Stood on its tip on the table.
  Scene tip = s.with_pose("pencil-1", Pose{Vec3(-0.25, 0.75 + 0.095, -0.25), quat_from_euler_deg(Vec3(0, 0, 90))});
  EXPECT_EQ(check_habitat(tip, "pencil-1"), std::vector<std::string>{"pencil-flat"});
}

TEST(Scene, TableToleratesAnyYaw) {
  Scene s = vtest::stock_scene();
  for (int yaw = 0; yaw < 360; yaw += 15) {
    Scene t = s.with_pose("table-1", Pose{Vec3(0, 0.375, 0), quat_from_euler_deg(Vec3(0, yaw, 0))});
    EXPECT_TRUE(check_habitat(t, "table-1").empty()) << yaw;
  }
}

TEST(Scene, FloatingCupViolatesSupport) {
  Scene s = vtest::stock_scene().with_pose("cup-1", Pose{Vec3(0.3, 1.5, 0.2), Quat::Identity()});
  EXPECT_EQ(check_habitat(s, "cup-1"), std::vector<std::string>{"cup-upright"});
}

TEST(Scene, Interpenetration) {
  Scene s = place(place(cube_scene(), "a", "cube", Vec3::Zero()), "b", "cube", Vec3(5, 0, 0));
  EXPECT_FALSE(interpenetrates(s, "a", "b"));
  Scene same = place(place(cube_scene(), "a", "cube", Vec3::Zero()), "b", "cube", Vec3::Zero());
  EXPECT_TRUE(interpenetrates(same, "a", "b"));
  Scene on = place(vtest::stock_scene(), "block-2", "block", Vec3(0.3, 0.8, -0.2));
  EXPECT_FALSE(interpenetrates(on, "block-2", "table-1"));
  EXPECT_EQ(material_contact(on, "block-2", "table-1"), Contact::touching);
}

TEST(Scene, BallFitsInCup) {
  Scene s = vtest::stock_scene();
  auto pose = fit_inside(s, "ball-1", "cup-1");
  ASSERT_TRUE(pose);
  const Box cavity = *world_region(s, "cup-1").cavity;
  EXPECT_TRUE(cavity.contains(pose->position, 1e-12));
  // Resting on the cavity floor, which lies inside the cup's hull.
  EXPECT_EQ(classify(region_at(s, "ball-1", *pose), world_region(s, "cup-1")), RCC8Relation::NTPP);
}

TEST(Scene, KnifeFitsOnlyUpright) {
  Scene s = vtest::stock_scene();
  EXPECT_FALSE(fit_inside_oriented(s, "knife-1", "cup-1", Quat::Identity()));
  auto pose = fit_inside(s, "knife-1", "cup-1");
  ASSERT_TRUE(pose);
  Vec3 long_axis = pose->rotation * Vec3::UnitX();
  EXPECT_GT(std::abs(long_axis.y()), std::cos(deg_to_rad(5.0)));
  // Longer than the cavity is deep, so it sticks out.
  EXPECT_EQ(classify(region_at(s, "knife-1", *pose), world_region(s, "cup-1")), RCC8Relation::PO);
}

TEST(Scene, WideFigureDoesNotFit) {
  Scene s = vtest::stock_scene();
  EXPECT_FALSE(fit_inside(s, "table-1", "cup-1"));
  EXPECT_FALSE(fit_inside(s, "plate-1", "cup-1"));
  EXPECT_THROW(fit_inside(s, "ball-1", "wall-1"), Error);
}

TEST(Scene, AttachedInstancesFollowTheirCarrier) {
  Scene s = vtest::stock_scene().attached("ball-1", "agent");
  Vec3 before = s.instance("ball-1").pose.position;
  Pose agent = s.pose_of("agent");
  agent.position += Vec3(0.4, -0.1, 0.2);
  Scene moved = s.with_pose("agent", agent);
  EXPECT_LT((moved.instance("ball-1").pose.position - before - Vec3(0.4, -0.1, 0.2)).norm(), 1e-12);
  EXPECT_THROW(s.attached("agent", "ball-1"), Error);
  Scene chain = vtest::stock_scene().attached("cup-1", "plate-1");
  EXPECT_THROW(chain.attached("plate-1", "cup-1"), Error);
}

TEST(Scene, DocumentsRoundTrip) {
  Scene s = vtest::stock_scene().attached("ball-1", "agent");
  Scene again = load_scene(serialize(s), vtest::stock_voxicon());
  EXPECT_EQ(serialize(again), serialize(s));
  ASSERT_TRUE(again.instance("ball-1").attached_to);
  EXPECT_EQ(*again.instance("ball-1").attached_to, "agent");
}

TEST(Scene, DocumentErrors) {
  auto load = [](const std::string& text) { return load_scene(text, vtest::stock_voxicon()); };
  auto kind_line = [&](const std::string& text) {
    try {
      load(text);
    } catch (const Error& e) {
      return std::pair{e.kind(), e.line()};
    }
    return std::pair{ErrorKind::step_error, -1};
  };
  auto unknown = kind_line("scene/1\ninstance x unicorn {\n  position 0 0 0\n}\n");
  EXPECT_EQ(exit_code(unknown.first), 3);
  EXPECT_EQ(unknown.second, 2);
  auto dup = kind_line("scene/1\ninstance x ball {\n}\ninstance x ball {\n}\n");
  EXPECT_EQ(exit_code(dup.first), 3);
  EXPECT_EQ(dup.second, 4);
  auto bad = kind_line("scene/1\ninstance x ball {\n  position 0 zero 0\n}\n");
  EXPECT_EQ(bad.first, ErrorKind::syntax);
  EXPECT_EQ(bad.second, 3);
  auto scale = kind_line("scene/1\ninstance x ball {\n  scale 1 0 1\n}\n");
  EXPECT_EQ(exit_code(scale.first), 3);
  EXPECT_EQ(load("scene/1\n").instances().size(), 0u);
  try {
    load_scene_file("/nonexistent/x.scene", vtest::stock_voxicon());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
}
