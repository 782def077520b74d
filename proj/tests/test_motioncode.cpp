#include "motionscript/motioncode.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace motionscript;

namespace {

SegmentationParams params(int min_run, int max_range = 15, int min_transitions = 1) {
  SegmentationParams p;
  p.min_run = min_run;
  p.max_range = max_range;
  p.min_transitions = min_transitions;
  return p;
}

NoiseConfig no_noise() {
  NoiseConfig n;
  n.enabled = false;
  return n;
}

std::vector<Motioncode> codes_for(const MotionSequence& seq, const std::vector<std::string>& lines) {
  std::vector<PosecodeInstance> inst;
  for (const auto& l : lines) inst.push_back(parse_instance(l));
  const auto tl = extract_posecode_timelines(seq, inst, no_noise(), {});
  return build_motioncodes(tl, seq, {}, no_noise());
}

}  // namespace

TEST_CASE("fill and hysteresis") {
  const int I = kIgnored;
  CHECK(fill_ignored(std::vector<int>{I, 2, I, 3, I}) == std::vector<int>{2, 2, 2, 3, 3});
  CHECK(fill_ignored(std::vector<int>{I, I}).empty());
  CHECK(stabilize_categories(std::vector<int>{0, 1, 0, 1, 0}, 2) == std::vector<int>{0, 0, 0, 0, 0});
  CHECK(stabilize_categories(std::vector<int>{0, 1, 1, 2, 2, 2}, 3) == std::vector<int>{0, 0, 0, 2, 2, 2});
  CHECK(stabilize_categories(std::vector<int>{3}, 3) == std::vector<int>{3});
}

TEST_CASE("hand traced segments") {
  const auto segs = detect_motion_segments(std::vector<int>{0, 0, 1, 1, 2, 2}, params(2));
  REQUIRE(segs.size() == 1);
  CHECK(segs[0] == MotionSegment{0, 5, 1, 2});
  CHECK(detect_motion_segments(std::vector<int>{0, 1, 0, 1, 0}, params(2)).empty());

  // a long hold splits the motion in two
  const std::vector<int> hold{0, 0, 1, 1, 1, 1, 1, 1, 2, 2};
  CHECK(detect_motion_segments(hold, params(2, 5)).size() == 1);
  const auto split = detect_motion_segments(hold, params(2, 3));
  REQUIRE(split.size() == 2);
  CHECK(split[0] == MotionSegment{0, 4, 1, 1});
  CHECK(split[1] == MotionSegment{5, 9, 1, 1});

  // direction change
  const auto updown = detect_motion_segments(std::vector<int>{0, 0, 1, 1, 1, 0, 0}, params(2));
  REQUIRE(updown.size() == 2);
  CHECK(updown[0].spatial == 1);
  CHECK(updown[1].spatial == -1);
  CHECK(updown[0].t_end <= updown[1].t_start);

  CHECK(detect_motion_segments(std::vector<int>{0, 0, 1, 1}, params(2, 15, 2)).empty());
  CHECK(detect_motion_segments(std::vector<int>{4}, params(1)).empty());
}

TEST_CASE("segments match the brute-force oracle") {
  std::mt19937_64 gen(20240611);
  std::uniform_int_distribution<int> mr(1, 4), range(0, 8), mt(1, 3);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto v = oracle::random_categories(gen, 50, 6);
    const auto p = params(mr(gen), range(gen), mt(gen));
    const auto got = detect_motion_segments(v, p);
    CAPTURE(trial);
    REQUIRE(got == oracle::segments(v, p));
    for (std::size_t k = 0; k < got.size(); ++k) {
      CHECK(got[k].t_start < got[k].t_end);
      CHECK(got[k].spatial == compute_spatial_attribute(got[k], v, p.min_run));
      if (k > 0) CHECK(got[k - 1].t_end <= got[k].t_start);
    }
  }
}

TEST_CASE("time reversal negates the spatial attribute") {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> cat(0, 5), run(3, 9), len(2, 8);
  for (int trial = 0; trial < 300; ++trial) {
    // every run at least min_run long, so hysteresis treats both directions alike
    std::vector<int> v;
    int prev = -1;
    for (int r = len(gen); r > 0; --r) {
      int c = cat(gen);
      if (c == prev) c = (c + 1) % 6;
      v.insert(v.end(), static_cast<std::size_t>(run(gen)), c);
      prev = c;
    }
    std::vector<int> rev(v.rbegin(), v.rend());
    const auto p = params(3, 6);
    auto fwd = detect_motion_segments(v, p);
    auto bwd = detect_motion_segments(rev, p);
    REQUIRE(fwd.size() == bwd.size());
    const int last = static_cast<int>(v.size()) - 1;
    std::reverse(bwd.begin(), bwd.end());
    for (std::size_t k = 0; k < fwd.size(); ++k) {
      CHECK(bwd[k].spatial == -fwd[k].spatial);
      CHECK(bwd[k].t_start == last - fwd[k].t_end);
      CHECK(bwd[k].t_end == last - fwd[k].t_start);
      const auto a = compute_velocity_attribute(fwd[k].spatial, fwd[k].t_start, fwd[k].t_end, 20.0, {});
      const auto b = compute_velocity_attribute(bwd[k].spatial, bwd[k].t_start, bwd[k].t_end, 20.0, {});
      CHECK(a.per_frame == b.per_frame);
    }
  }
}

TEST_CASE("velocity attribute") {
  const auto v = compute_velocity_attribute(-3, 10, 16, 20.0, {});
  CHECK(v.per_frame == 0.5);
  CHECK(v.velocity_class == VelocityClass::very_fast);  // 10 per second
  CHECK(compute_velocity_attribute(1, 0, 40, 20.0, {}).velocity_class == VelocityClass::slow);
  CHECK(compute_velocity_attribute(1, 0, 41, 20.0, {}).velocity_class == VelocityClass::very_slow);
  CHECK(compute_velocity_attribute(3, 0, 20, 20.0, {}).velocity_class == VelocityClass::fast);
  CHECK_THROWS(compute_velocity_attribute(1, 5, 5, 20.0, {}));
}

TEST_CASE("intensity classes") {
  IntensityEdges e;
  CHECK(e.classify(0) == Intensity::stationary);
  CHECK(e.classify(1) == Intensity::slight);
  CHECK(e.classify(2) == Intensity::moderate);
  CHECK(e.classify(5) == Intensity::significant);
  e.edges = {2, 2, 3};
  CHECK_THROWS(e.validate());
}

TEST_CASE("arm curl gives one significant bend") {
  const auto seq = synth::parametric({{0, {180.0}}, {60, {40.0}}}, [](const std::vector<double>& p) {
    return synth::with_elbow(synth::tpose(), false, p[0]);
  });
  const auto codes = codes_for(seq, {"angle right_shoulder right_elbow right_wrist"});
  REQUIRE(codes.size() == 1);
  CHECK(codes[0].family == Family::angular);
  CHECK(codes[0].spatial == 5);
  CHECK(codes[0].direction_label == "bending");
  CHECK(codes[0].intensity == Intensity::significant);
  CHECK(codes[0].start_category == 0);
  CHECK(codes[0].end_category == 5);
}

TEST_CASE("hands moving apart") {
  auto at = [](double half) {
    auto f = synth::tpose();
    f.row(joint::left_wrist) << half, 1.2, 0.3;
    f.row(joint::right_wrist) << -half, 1.2, 0.3;
    return f;
  };
  const auto seq = synth::keyframes({{0, at(0.15)}, {5, at(0.15)}, {30, at(0.5)}, {35, at(0.5)}});
  const auto codes = codes_for(seq, {"distance left_wrist right_wrist"});
  REQUIRE(codes.size() == 1);
  CHECK(codes[0].family == Family::proximity);
  CHECK(codes[0].direction_label == "spreading");
  CHECK(codes[0].spatial == 2);
  CHECK(codes[0].intensity == Intensity::moderate);
}

TEST_CASE("spatial relation flips are unit steps") {
  auto at = [](double z) {
    auto f = synth::tpose();
    f.row(joint::left_wrist) << 0.3, 1.0, z;
    return f;
  };
  const auto seq = synth::keyframes({{0, at(-0.3)}, {5, at(-0.3)}, {25, at(0.3)}, {30, at(0.3)}});
  const auto codes = codes_for(seq, {"relative_position z left_wrist pelvis"});
  REQUIRE(codes.size() == 1);
  CHECK(codes[0].family == Family::spatial_relation);
  CHECK(codes[0].spatial == 1);
  CHECK(codes[0].direction_label == "behind-to-front");
  CHECK_FALSE(codes[0].intensity);
}

TEST_CASE("velocity edge noise is deterministic") {
  const auto seq = synth::parametric({{0, {180.0, 180.0}}, {30, {60.0, 100.0}}}, [](const std::vector<double>& p) {
    return synth::with_elbow(synth::with_elbow(synth::tpose(), true, p[0]), false, p[1]);
  });
  const auto inst = default_instances();
  NoiseConfig noise;
  noise.seed = 5;
  const auto tl = extract_posecode_timelines(seq, inst, noise, {});
  const auto a = build_motioncodes(tl, seq, {}, noise);
  const auto b = build_motioncodes(tl, seq, {}, noise);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].velocity_class == b[i].velocity_class);
    CHECK(a[i].velocity == b[i].velocity);
  }
}

TEST_CASE("direction labels") {
  const auto px = parse_instance("position x root_relative left_wrist");
  CHECK(direction_label(Family::displacement, px, 1) == "leftward");
  CHECK(direction_label(Family::displacement, px, -1) == "rightward");
  const auto oy = parse_instance("orientation y");
  CHECK(direction_label(Family::rotation, oy, -1) == "turning clockwise");
  CHECK(mirror_label("turning clockwise") == "turning counter-clockwise");
  CHECK(mirror_label("right-to-left") == "left-to-right");
  CHECK(mirror_label("bending") == "bending");
  CHECK(parse_family("spatial-relation") == Family::spatial_relation);
  CHECK(parse_velocity("very fast") == VelocityClass::very_fast);
  CHECK_THROWS(parse_intensity("huge"));
  CHECK_FALSE(family_of(PosecodeKind::ground_contact));
}

TEST_CASE("motioncode config") {
  MotioncodeConfig c;
  CHECK(c.segmentation(20.0).max_range == 15);
  CHECK(c.segmentation(30.0).max_range == 23);
  c.max_range_seconds = 0.0;
  CHECK(c.segmentation(20.0).max_range == 1);
  c.min_run = 0;
  CHECK_THROWS(c.validate());
}
