#include "support.hpp"
#include "voxsim/nlp.hpp"

#include <gtest/gtest.h>

using namespace voxsim;

namespace {

const Voxicon& vox() { return *vtest::stock_voxicon(); }

NounPhrase np(std::string head, std::vector<std::string> attrs = {}) { return NounPhrase{std::move(head), std::move(attrs), "the"}; }

template <class Fn>
Error caught(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error";
  return Error(ErrorKind::io, "none");
}

Scene with_agent(Scene s) { return s.with_agent(Agent{"agent", Pose{Vec3(0, 2, 0), Quat::Identity()}}); }

Scene ball_and_table() {
  Scene s = with_agent(vtest::empty_scene());
  s = vtest::place(s, "table-1", "table", Vec3(0, 0.375, 0));
  return vtest::place(s, "ball-1", "ball", Vec3(1, 0.03, 0));
}

}  // namespace

TEST(Nlp, ParsesImperativePut) {
  PredArgStructure pa = parse("put the ball on the table", vox());
  EXPECT_EQ(pa.mood, Mood::imperative);
  EXPECT_EQ(pa.verb, "put");
  EXPECT_EQ(pa.object, np("ball"));
  ASSERT_TRUE(pa.oblique);
  EXPECT_EQ(pa.oblique->preposition, "on");
  EXPECT_EQ(pa.oblique->object, np("table"));
}

TEST(Nlp, ParsesDeclarativeRoll) {
  PredArgStructure pa = parse("the ball rolled", vox());
  EXPECT_EQ(pa.mood, Mood::declarative);
  EXPECT_EQ(pa.verb, "roll");
  EXPECT_EQ(pa.object, np("ball"));
  EXPECT_FALSE(pa.oblique);
}

TEST(Nlp, ParsesAttributes) {
  PredArgStructure pa = parse("put the small block in the cup", vox());
  EXPECT_EQ(pa.object, np("block", {"small"}));
  EXPECT_EQ(pa.oblique->preposition, "in");
  EXPECT_EQ(pa.oblique->object, np("cup"));
}

TEST(Nlp, CaseAndFinalPeriodAreIgnored) {
  EXPECT_EQ(parse("Put The Ball ON the TABLE.", vox()), parse("put the ball on the table", vox()));
  EXPECT_EQ(tokenize("  The ball   rolled. "), (std::vector<std::string>{"the", "ball", "rolled"}));
}

TEST(Nlp, UnknownWordCarriesItsPosition) {
  Error e = caught([] { parse("put the ball on the zorb", vox()); });
  EXPECT_EQ(e.kind(), ErrorKind::unknown_word);
  EXPECT_EQ(e.column(), 6);
  EXPECT_EQ(caught([] { parse("quickly put the ball", vox()); }).column(), 1);
}

TEST(Nlp, UngrammaticalInputs) {
  for (const char* s : {"the ball roll", "put ball on the table", "put the ball on", "put the on the table",
                        "the ball", "put the ball the table", "rolled the ball", ""}) {
    Error e = caught([&] { parse(s, vox()); });
    EXPECT_EQ(e.kind(), ErrorKind::ungrammatical) << '"' << s << '"';
  }
}

TEST(Nlp, RenderRoundTripsEveryStructure) {
  int checked = 0;
  for (const char* verb : {"put", "stack", "roll", "slide", "move", "turn"}) {
    for (const char* noun : {"ball", "table", "block", "plate", "cup", "knife", "wall", "pencil"}) {
      for (const auto& attrs : std::vector<std::vector<std::string>>{{}, {"small"}, {"big"}, {"small", "big"}}) {
        for (Mood mood : {Mood::imperative, Mood::declarative}) {
          for (const char* prep : {"", "on", "in"}) {
            PredArgStructure pa;
            pa.mood = mood;
            pa.verb = verb;
            pa.object = np(noun, attrs);
            if (*prep) {
              if (mood == Mood::declarative) continue;
              pa.oblique = Oblique{prep, np("table", {"big"})};
            }
            std::string text = render(pa, vox());
            EXPECT_EQ(parse(text, vox()), pa) << text;
            ++checked;
          }
        }
      }
    }
  }
  EXPECT_GT(checked, 500);
}

TEST(Nlp, GroundsPutInASmallScene) {
  Scene s = ball_and_table();
  GroundingResult g = ground(parse("put the ball on the table", vox()), s, vox());
  ASSERT_TRUE(g.ok()) << g.failure().message;
  const GroundedEvent& e = g.event();
  EXPECT_EQ(e.predicate, "put");
  EXPECT_EQ(*e.id("A1"), "agent");
  EXPECT_EQ(*e.id("A2"), "ball-1");
  const LocationBinding* loc = e.location("A3");
  ASSERT_TRUE(loc);
  EXPECT_EQ(loc->prep, Preposition::on);
  EXPECT_EQ(loc->ground, "table-1");
  ASSERT_TRUE(loc->goal);
  EXPECT_EQ(loc->goal->ground, "table-1");
  EXPECT_TRUE(e.unspecified.empty());
}

TEST(Nlp, GroundingFailures) {
  Scene two = vtest::fixture("equal_tables.scene");
  GroundingResult g = ground(parse("put the ball on the table", vox()), with_agent(two), vox());
  ASSERT_FALSE(g.ok());
  EXPECT_EQ(g.failure().kind, ErrorKind::ambiguous_referent);

  g = ground(parse("put the ball on the cup", vox()), ball_and_table(), vox());
  ASSERT_FALSE(g.ok());
  EXPECT_EQ(g.failure().kind, ErrorKind::no_referent);
}

TEST(Nlp, AttributesPickDistinctTables) {
  Scene s = with_agent(vtest::fixture("two_tables.scene"));
  GroundingResult small = ground(parse("put the ball on the small table", vox()), s, vox());
  GroundingResult big = ground(parse("put the ball on the big table", vox()), s, vox());
  ASSERT_TRUE(small.ok() && big.ok());
  EXPECT_EQ(small.event().location("A3")->ground, "table-1");
  EXPECT_EQ(big.event().location("A3")->ground, "table-2");
}

TEST(Nlp, RollCollectsOpenParameters) {
  Scene s = vtest::fixture("empty_plane.scene");
  GroundingResult g = ground(parse("the ball rolled", vox()), s, vox());
  ASSERT_TRUE(g.ok());
  std::vector<std::string> names;
  for (const auto& spec : g.event().unspecified) names.push_back(spec.name);
  EXPECT_EQ(names, (std::vector<std::string>{"direction", "distance"}));
  EXPECT_EQ(*g.event().id("A2"), "ball-1");
}

TEST(Nlp, GroundingIgnoresInsertionOrder) {
  Scene forward = with_agent(vtest::empty_scene()), backward = forward;
  std::vector<std::pair<std::string, double>> tables = {{"table-1", 0.7}, {"table-2", 1.3}, {"table-3", 1.0}};
  for (const auto& [id, sc] : tables)
    forward = vtest::place(forward, id, "table", Vec3(3.0 * sc, 0.375 * sc, 0), Quat::Identity(), Vec3::Constant(sc));
  for (auto it = tables.rbegin(); it != tables.rend(); ++it)
    backward = vtest::place(backward, it->first, "table", Vec3(3.0 * it->second, 0.375 * it->second, 0),
                            Quat::Identity(), Vec3::Constant(it->second));
  forward = vtest::place(forward, "ball-1", "ball", Vec3(-1, 0.03, 0));
  backward = vtest::place(backward, "ball-1", "ball", Vec3(-1, 0.03, 0));
  for (const char* s : {"put the ball on the small table", "put the ball on the big table"}) {
    auto a = ground(parse(s, vox()), forward, vox()), b = ground(parse(s, vox()), backward, vox());
    ASSERT_TRUE(a.ok() && b.ok());
    EXPECT_EQ(a.event().location("A3")->ground, b.event().location("A3")->ground);
  }
}

TEST(Nlp, EveryStockSentenceGroundsOrFailsCleanly) {
  Scene s = vtest::stock_scene();
  int grounded = 0, failed = 0;
  for (const char* verb : {"put", "stack", "roll", "slide", "move", "turn"}) {
    for (const char* noun : {"ball", "table", "block", "plate", "cup", "knife", "wall", "pencil"}) {
      for (const char* tail : {"", " on the table", " in the cup", " on the wall", " in the wall", " on the small plate"}) {
        std::string sentence = std::string(verb) + " the " + noun + tail;
        GroundingResult g = ground(parse(sentence, vox()), s, vox());
        if (g.ok()) {
          ++grounded;
        } else {
          ++failed;
          EXPECT_FALSE(g.failure().message.empty()) << sentence;
        }
      }
    }
  }
  EXPECT_GT(grounded, 0);
  EXPECT_GT(failed, 0);
}
