#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "marlx/envs/particle_world.hpp"
#include "marlx/envs/rel_overgen.hpp"
#include "marlx/errors.hpp"

using namespace marlx;
using namespace marlx::envs;
using numkit::SeededRng;

namespace {

// Scripted evaluation of the reward surface, independent of the library path.
double scripted_reward(const std::vector<int>& p, const RelOvergenConfig& c) {
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    s1 += (p[i] - c.spike_pos[i]) * (p[i] - c.spike_pos[i]);
    s2 += (p[i] - c.plateau_pos[i]) * (p[i] - c.plateau_pos[i]);
  }
  return std::max(c.r_plus - c.delta / double(c.d) * s1,
                  c.r_minus - 1.0 / (8.0 * double(c.d)) * s2);
}

RelOvergenConfig paper_config() {
  RelOvergenConfig c;
  c.n_agents = 2;
  c.d = 40;
  c.delta = 30.0;
  c.finalize();
  return c;
}

}  // namespace

TEST_CASE("rel_overgen reward: spike pays R+, plateau pays R-") {
  RelOvergenConfig c = paper_config();
  CHECK(rel_overgen_reward(c.spike_pos, c) == 12.0);
  CHECK(rel_overgen_reward(c.plateau_pos, c) == 0.0);
}

TEST_CASE("rel_overgen reward: one step off the spike") {
  RelOvergenConfig c = paper_config();
  CHECK(rel_overgen_reward({1, 0}, c) == doctest::Approx(11.25).epsilon(1e-15));
  CHECK(rel_overgen_reward({0, 1}, c) == doctest::Approx(11.25).epsilon(1e-15));
}

TEST_CASE("rel_overgen reward: out-of-range positions are rejected") {
  RelOvergenConfig c = paper_config();
  CHECK_THROWS_AS((void)rel_overgen_reward({40, 0}, c), DomainError);
  CHECK_THROWS_AS((void)rel_overgen_reward({-1, 0}, c), DomainError);
  CHECK_THROWS_AS((void)rel_overgen_reward({0, 0, 0}, c), DomainError);
}

TEST_CASE("rel_overgen reward surface: spike is the unique global maximum") {
  for (auto [d, delta] : {std::pair<std::size_t, double>{40, 30.0}, {20, 60.0}}) {
    RelOvergenConfig c;
    c.d = d;
    c.delta = delta;
    c.finalize();
    double best = -1e300;
    int best_count = 0;
    for (int x = 0; x < int(d); ++x)
      for (int y = 0; y < int(d); ++y) {
        double r = rel_overgen_reward({x, y}, c);
        if (r > best + 1e-12) {
          best = r;
          best_count = 1;
        } else if (std::fabs(r - best) <= 1e-12) {
          ++best_count;
        }
      }
    CHECK(best == c.r_plus);
    CHECK(best_count == 1);
    CHECK(rel_overgen_reward(c.spike_pos, c) == best);
  }
}

TEST_CASE("rel_overgen step: boundary clamp and stay") {
  RelOvergenConfig c = paper_config();
  RelOvergenEnv env(c);
  SeededRng rng(1);
  env.reset(rng);
  for (int i = 0; i < 45; ++i) env.step({RelOvergenEnv::left, RelOvergenEnv::left});
  CHECK(env.positions() == std::vector<int>{0, 0});

  DecPomdpStep a = env.step({RelOvergenEnv::left, RelOvergenEnv::left});
  CHECK(env.positions() == std::vector<int>{0, 0});  // clamped at the boundary
  DecPomdpStep b = env.step({RelOvergenEnv::stay, RelOvergenEnv::stay});
  CHECK(b.reward == a.reward);  // re-emitted at unchanged positions
  CHECK(b.reward == 12.0);
}

TEST_CASE("rel_overgen step: one-hot observations and joint state") {
  RelOvergenConfig c = paper_config();
  RelOvergenEnv env(c);
  SeededRng rng(3);
  DecPomdpStep s = env.reset(rng);
  REQUIRE(s.joint_observation.size() == 2);
  for (std::size_t a = 0; a < 2; ++a) {
    REQUIRE(s.joint_observation[a].size() == c.d);
    double sum = 0.0;
    for (double v : s.joint_observation[a]) sum += v;
    CHECK(sum == 1.0);
    CHECK(s.joint_observation[a][std::size_t(env.positions()[a])] == 1.0);
  }
  CHECK(s.global_state.size() == 2 * c.d);
  CHECK(s.reward == 0.0);
  CHECK(s.step_index == 0);
  CHECK_FALSE(s.done);
}

TEST_CASE("rel_overgen step: invalid actions and finished episodes are rejected") {
  RelOvergenConfig c = paper_config();
  c.episode_length = 2;
  RelOvergenEnv env(c);
  SeededRng rng(4);
  env.reset(rng);
  CHECK_THROWS_AS(env.step({3, 0}), DomainError);
  env.step({1, 1});
  DecPomdpStep last = env.step({1, 1});
  CHECK(last.done);
  CHECK_THROWS_AS(env.step({1, 1}), DomainError);
}

TEST_CASE("rel_overgen rollout rewards match a scripted trace") {
  RelOvergenConfig c = paper_config();
  RelOvergenEnv env(c);
  SeededRng rng(5);
  SeededRng actions(6);
  DecPomdpStep s = env.reset(rng);
  std::vector<int> pos = env.positions();
  for (int t = 0; t < 100 && !s.done; ++t) {
    std::vector<int> act{int(actions.uniform_int(3)), int(actions.uniform_int(3))};
    s = env.step(act);
    for (std::size_t i = 0; i < 2; ++i) {
      pos[i] += act[i] - 1;
      pos[i] = std::max(0, std::min(int(c.d) - 1, pos[i]));
    }
    CHECK(s.reward == scripted_reward(pos, c));
  }
}

TEST_CASE("rel_overgen reset: deterministic per seed") {
  RelOvergenConfig c = paper_config();
  RelOvergenEnv a(c), b(c);
  SeededRng r1(9), r2(9);
  DecPomdpStep sa = a.reset(r1);
  DecPomdpStep sb = b.reset(r2);
  CHECK(sa.joint_observation == sb.joint_observation);
  CHECK(a.positions() == b.positions());
}

TEST_CASE("particle dynamics: staying still from rest does not move") {
  ParticleParams p;
  ParticleEnv env(ParticleTask::placement, p);
  SeededRng rng(10);
  env.reset(rng);
  env.state_mut().agent_pos[0] = {-0.5, -0.3};
  env.state_mut().agent_pos[1] = {0.5, 0.3};
  auto pos0 = env.state().agent_pos;
  env.step({ParticleEnv::stay, ParticleEnv::stay});
  CHECK(env.state().agent_pos[0].x == pos0[0].x);
  CHECK(env.state().agent_pos[0].y == pos0[0].y);
  CHECK(env.state().agent_pos[1].x == pos0[1].x);
  CHECK(env.state().agent_pos[1].y == pos0[1].y);
}

TEST_CASE("particle dynamics: eastward acceleration follows the damped series") {
  ParticleParams p;
  ParticleEnv env(ParticleTask::placement, p);
  SeededRng rng(11);
  env.reset(rng);
  env.state_mut().agent_pos[0] = {-0.5, 0.3};  // off the other agent's row
  env.state_mut().agent_pos[1] = {0.8, -0.8};
  env.state_mut().agent_vel[0] = {0.0, 0.0};

  double v = 0.0, x = -0.5;
  for (int k = 0; k < 6; ++k) {
    env.step({ParticleEnv::east, ParticleEnv::stay});
    v = std::min(p.damping * v + p.accel * p.dt, p.max_speed);
    x += v * p.dt;
    CHECK(env.state().agent_vel[0].x == doctest::Approx(v).epsilon(1e-12));
    CHECK(env.state().agent_pos[0].x == doctest::Approx(x).epsilon(1e-12));
    CHECK(env.state().agent_pos[0].y == 0.3);
  }
}

TEST_CASE("particle dynamics: east wall clamps position") {
  ParticleParams p;
  ParticleEnv env(ParticleTask::placement, p);
  SeededRng rng(12);
  env.reset(rng);
  env.state_mut().agent_pos[0] = {1.0 - p.agent_radius, 0.4};
  env.state_mut().agent_pos[1] = {-0.8, -0.8};
  env.step({ParticleEnv::east, ParticleEnv::stay});
  CHECK(env.state().agent_pos[0].x == 1.0 - p.agent_radius);
  CHECK(env.state().agent_vel[0].x == 0.0);
}

TEST_CASE("particle world: positions never leave the arena") {
  ParticleParams p;
  for (ParticleTask task : {ParticleTask::box_push, ParticleTask::placement}) {
    ParticleEnv env(task, p);
    SeededRng rng(13);
    SeededRng act(14);
    DecPomdpStep s = env.reset(rng);
    for (int t = 0; t < 300; ++t) {
      if (s.done) {
        s = env.reset(rng);
        continue;
      }
      s = env.step({int(act.uniform_int(5)), int(act.uniform_int(5))});
      for (const Vec2& pos : env.state().agent_pos) {
        CHECK(std::fabs(pos.x) <= 1.0);
        CHECK(std::fabs(pos.y) <= 1.0);
      }
      if (task == ParticleTask::box_push) {
        CHECK(std::fabs(env.state().box_pos.x) <= 1.0);
        CHECK(std::fabs(env.state().box_pos.y) <= 1.0);
      }
    }
  }
}

TEST_CASE("box push reward table") {
  ParticleParams p;
  ParticleWorldState s;
  s.agent_pos = {{-0.5, 0.0}, {0.5, 0.0}};
  s.agent_vel = {{}, {}};
  s.landmark_corner = 4;  // (0.75, -0.75)
  s.box_pos = {0.0, 0.0};

  auto [r1, d1] = box_push_reward(s, p);
  CHECK(r1 == -0.1);
  CHECK_FALSE(d1);

  s.agent_pos[1] = {-0.42, 0.0};  // centers 0.08 < 0.1 apart: collision
  auto [r2, d2] = box_push_reward(s, p);
  CHECK(r2 == -2.1);
  CHECK_FALSE(d2);

  s.box_pos = {0.75, -0.70};  // inside the landmark area
  auto [r3, d3] = box_push_reward(s, p);
  CHECK(r3 == 100.0);
  CHECK(d3);
}

TEST_CASE("coordinated placement reward table") {
  ParticleParams p;
  ParticleWorldState s;
  s.landmarks = placement_landmarks();
  s.agent_vel = {{}, {}};
  auto at = [&](LandmarkColor color, int set) {
    for (const Landmark& lm : s.landmarks)
      if (lm.color == color && ((set == 0) == (lm.pos.x < 0.0))) return lm.pos;
    return Vec2{};
  };

  s.agent_pos = {at(LandmarkColor::red, 0), at(LandmarkColor::red, 1)};
  CHECK(coordinated_placement_reward(s, p) == 10.0);
  s.agent_pos = {at(LandmarkColor::blue, 0), at(LandmarkColor::blue, 1)};
  CHECK(coordinated_placement_reward(s, p) == 2.0);
  s.agent_pos = {at(LandmarkColor::yellow, 0), at(LandmarkColor::yellow, 1)};
  CHECK(coordinated_placement_reward(s, p) == 1.0);
  s.agent_pos = {at(LandmarkColor::yellow, 0), {0.0, 0.9}};  // one on yellow, one off
  CHECK(coordinated_placement_reward(s, p) == 0.5);
  s.agent_pos = {{0.0, 0.9}, {0.0, -0.9}};  // both off
  CHECK(coordinated_placement_reward(s, p) == 0.0);
  s.agent_pos = {at(LandmarkColor::red, 0), at(LandmarkColor::blue, 1)};  // red+blue
  CHECK(coordinated_placement_reward(s, p) == 0.5);
  s.agent_pos = {at(LandmarkColor::blue, 0), at(LandmarkColor::yellow, 1)};  // blue+yellow
  CHECK(coordinated_placement_reward(s, p) == 0.0);
}

TEST_CASE("observation dimensions are exactly 16 and 43") {
  ObservationSpec box{ParticleTask::box_push, 0.6, 2};
  ObservationSpec place{ParticleTask::placement, 0.6, 2};
  CHECK(box.dimension() == 16);
  CHECK(place.dimension() == 43);

  ParticleParams p;
  ParticleEnv b(ParticleTask::box_push, p);
  ParticleEnv c(ParticleTask::placement, p);
  SeededRng rng(20);
  CHECK(b.reset(rng).joint_observation[0].size() == 16);
  CHECK(c.reset(rng).joint_observation[0].size() == 43);
}

TEST_CASE("observe: masking and normalization in box push") {
  ObservationSpec spec{ParticleTask::box_push, 0.6, 2};
  ParticleWorldState s;
  s.agent_pos = {{0.0, 0.0}, {0.3, 0.0}};
  s.agent_vel = {{0.1, -0.1}, {0.2, 0.0}};
  s.box_pos = {0.0, 0.7};  // beyond range
  s.box_vel = {0.3, 0.3};
  s.landmark_corner = 1;  // (0.75, 0.75), far away

  std::vector<double> obs = observe(s, 0, spec);
  CHECK(obs[0] == 0.0);  // self pos
  CHECK(obs[2] == 0.1);  // self vel
  CHECK(obs[4] == 1.0);  // other visible at 0.3 m east
  CHECK(obs[5] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(obs[6] == 0.0);
  CHECK(obs[7] == 0.2);  // visible velocity passes through
  // object beyond range: (0, 1, 1, 0, 0)
  CHECK(obs[9] == 0.0);
  CHECK(obs[10] == 1.0);
  CHECK(obs[11] == 1.0);
  CHECK(obs[12] == 0.0);
  CHECK(obs[13] == 0.0);
  // landmark beyond range: corner masked to 0
  CHECK(obs[14] == 0.0);
  CHECK(obs[15] == 0.0);

  // other agent beyond range
  s.agent_pos[1] = {0.7, 0.0};
  obs = observe(s, 0, spec);
  CHECK(obs[4] == 0.0);
  CHECK(obs[5] == 1.0);
  CHECK(obs[6] == 1.0);
  CHECK(obs[7] == 0.0);
  CHECK(obs[8] == 0.0);

  // same position: distance zero, visible
  s.agent_pos[1] = {0.0, 0.0};
  obs = observe(s, 0, spec);
  CHECK(obs[4] == 1.0);
  CHECK(obs[5] == 0.0);
  CHECK(obs[6] == 0.0);

  // landmark visible from nearby, corner index passes through
  s.agent_pos[0] = {0.7, 0.7};
  obs = observe(s, 0, spec);
  CHECK(obs[14] == 1.0);
  CHECK(obs[15] == 1.0);
}

TEST_CASE("observe: with range zero every non-self block is masked") {
  ParticleWorldState s;
  s.agent_pos = {{0.1, 0.1}, {0.1, 0.1}};
  s.agent_vel = {{0.5, 0.5}, {0.5, 0.5}};
  s.box_pos = {0.1, 0.1};
  s.landmark_corner = 2;
  s.landmarks = placement_landmarks();

  ObservationSpec box{ParticleTask::box_push, 0.0, 2};
  std::vector<double> obs = observe(s, 0, box);
  double agent_mask[5] = {0, 1, 1, 0, 0};
  for (int i = 0; i < 5; ++i) {
    CHECK(obs[4 + i] == agent_mask[i]);
    CHECK(obs[9 + i] == agent_mask[i]);
  }
  CHECK(obs[14] == 0.0);
  CHECK(obs[15] == 0.0);

  ObservationSpec place{ParticleTask::placement, 0.0, 2};
  obs = observe(s, 0, place);
  CHECK(obs[4] == 0.0);
  CHECK(obs[5] == 1.0);
  CHECK(obs[6] == 1.0);
  for (int lm = 0; lm < 6; ++lm) {
    std::size_t k = 7 + 6 * lm;
    CHECK(obs[k] == 0.0);
    CHECK(obs[k + 1] == 1.0);
    CHECK(obs[k + 2] == 1.0);
    CHECK(obs[k + 3] == 0.0);
    CHECK(obs[k + 4] == 0.0);
    CHECK(obs[k + 5] == 0.0);
  }
}

TEST_CASE("placement reset: agents start on the middle line, deterministically") {
  ParticleParams p;
  ParticleEnv a(ParticleTask::placement, p), b(ParticleTask::placement, p);
  SeededRng r1(30), r2(30);
  DecPomdpStep sa = a.reset(r1);
  DecPomdpStep sb = b.reset(r2);
  for (const Vec2& pos : a.state().agent_pos) {
    CHECK(pos.y == 0.0);
    CHECK(pos.x >= -1.0);
    CHECK(pos.x <= 1.0);
  }
  CHECK(sa.joint_observation == sb.joint_observation);
}

TEST_CASE("box push reset: landmark sits in one of the four corners") {
  ParticleParams p;
  ParticleEnv env(ParticleTask::box_push, p);
  SeededRng rng(31);
  bool corner_seen[5] = {false, false, false, false, false};
  for (int i = 0; i < 40; ++i) {
    env.reset(rng);
    int corner = env.state().landmark_corner;
    REQUIRE(corner >= 1);
    REQUIRE(corner <= 4);
    corner_seen[corner] = true;
    Vec2 lm = corner_position(corner);
    CHECK(std::fabs(lm.x) == 0.75);
    CHECK(std::fabs(lm.y) == 0.75);
  }
  CHECK(corner_seen[1]);
  CHECK(corner_seen[2]);
  CHECK(corner_seen[3]);
  CHECK(corner_seen[4]);
}

TEST_CASE("placement episodes emit exactly 100 steps") {
  ParticleParams p;
  ParticleEnv env(ParticleTask::placement, p);
  SeededRng rng(32);
  DecPomdpStep s = env.reset(rng);
  int steps = 0;
  while (!s.done) {
    s = env.step({ParticleEnv::stay, ParticleEnv::stay});
    ++steps;
  }
  CHECK(steps == 100);
  CHECK_THROWS_AS(env.step({ParticleEnv::stay, ParticleEnv::stay}), DomainError);
}

TEST_CASE("box push: one agent alone can push the object") {
  ParticleParams p;
  ParticleEnv env(ParticleTask::box_push, p);
  SeededRng rng(33);
  env.reset(rng);
  env.state_mut().agent_pos[0] = {-0.45, 0.0};
  env.state_mut().agent_vel[0] = {0.0, 0.0};
  env.state_mut().agent_pos[1] = {-0.9, 0.9};  // parked far away
  env.state_mut().box_pos = {-0.2, 0.0};
  env.state_mut().box_vel = {0.0, 0.0};
  env.state_mut().landmark_corner = 1;  // keep the goal off the push line

  for (int t = 0; t < 50; ++t) env.step({ParticleEnv::east, ParticleEnv::stay});
  CHECK(env.state().box_pos.x > 0.2);
  CHECK(std::fabs(env.state().box_pos.y) < 1e-9);
}

TEST_CASE("particle step: malformed actions are rejected") {
  ParticleParams p;
  ParticleEnv env(ParticleTask::placement, p);
  SeededRng rng(34);
  env.reset(rng);
  CHECK_THROWS_AS(env.step({5, 0}), DomainError);
  CHECK_THROWS_AS(env.step({0}), DomainError);
}
