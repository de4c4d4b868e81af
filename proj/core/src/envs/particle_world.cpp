#include "marlx/envs/particle_world.hpp"

#include <cmath>

#include "marlx/errors.hpp"

namespace marlx::envs {

namespace {

double distance(const Vec2& a, const Vec2& b) {
  double dx = b.x - a.x;
  double dy = b.y - a.y;
  return std::sqrt(dx * dx + dy * dy);
}

void clamp_speed(Vec2& v, double max_speed) {
  double s = std::sqrt(v.x * v.x + v.y * v.y);
  if (s > max_speed) {
    double k = max_speed / s;
    v.x *= k;
    v.y *= k;
  }
}

// Inelastic wall: clamp the center and kill the velocity component that
// pushed into the wall.
void clamp_walls(Vec2& pos, Vec2& vel, double radius) {
  double lim = 1.0 - radius;
  if (pos.x > lim) {
    pos.x = lim;
    if (vel.x > 0.0) vel.x = 0.0;
  } else if (pos.x < -lim) {
    pos.x = -lim;
    if (vel.x < 0.0) vel.x = 0.0;
  }
  if (pos.y > lim) {
    pos.y = lim;
    if (vel.y > 0.0) vel.y = 0.0;
  } else if (pos.y < -lim) {
    pos.y = -lim;
    if (vel.y < 0.0) vel.y = 0.0;
  }
}

// Spring repulsion between two overlapping discs, proportional to
// penetration depth. Returns the force on body B; body A gets the opposite.
Vec2 contact_force(const Vec2& a, const Vec2& b, double ra, double rb, double stiffness) {
  double dist = distance(a, b);
  double pen = (ra + rb) - dist;
  if (pen <= 0.0) return {0.0, 0.0};
  Vec2 dir{1.0, 0.0};
  if (dist > 1e-12) dir = {(b.x - a.x) / dist, (b.y - a.y) / dist};
  return {stiffness * pen * dir.x, stiffness * pen * dir.y};
}

Vec2 action_accel(int action, double accel) {
  switch (action) {
    case ParticleEnv::north: return {0.0, accel};
    case ParticleEnv::south: return {0.0, -accel};
    case ParticleEnv::east: return {accel, 0.0};
    case ParticleEnv::west: return {-accel, 0.0};
    case ParticleEnv::stay: return {0.0, 0.0};
    default: throw DomainError("particle world: action index out of range");
  }
}

void write_masked_entity(std::vector<double>& obs, std::size_t& k, std::size_t n_extra_zeros) {
  obs[k++] = 0.0;  // visibility
  obs[k++] = 1.0;  // relative position mask
  obs[k++] = 1.0;
  for (std::size_t i = 0; i < n_extra_zeros; ++i) obs[k++] = 0.0;
}

}  // namespace

Vec2 corner_position(int corner) {
  switch (corner) {
    case 1: return {0.75, 0.75};
    case 2: return {-0.75, 0.75};
    case 3: return {-0.75, -0.75};
    case 4: return {0.75, -0.75};
    default: throw DomainError("particle world: corner index must be 1..4");
  }
}

std::vector<Landmark> placement_landmarks() {
  std::vector<Landmark> lms;
  for (double x : {-0.65, 0.65}) {
    lms.push_back({{x, 0.55}, LandmarkColor::red});
    lms.push_back({{x, 0.0}, LandmarkColor::blue});
    lms.push_back({{x, -0.55}, LandmarkColor::yellow});
  }
  return lms;
}

std::vector<double> observe(const ParticleWorldState& state, std::size_t agent_id,
                            const ObservationSpec& spec) {
  if (agent_id >= state.agent_pos.size()) throw DomainError("observe: invalid agent id");
  std::vector<double> obs(spec.dimension(), 0.0);
  const Vec2 self = state.agent_pos[agent_id];
  std::size_t k = 0;

  obs[k++] = self.x;
  obs[k++] = self.y;
  obs[k++] = state.agent_vel[agent_id].x;
  obs[k++] = state.agent_vel[agent_id].y;

  std::size_t other = agent_id == 0 ? 1 : 0;
  bool other_visible = distance(self, state.agent_pos[other]) < spec.obs_range;

  if (spec.task == ParticleTask::box_push) {
    if (other_visible) {
      obs[k++] = 1.0;
      obs[k++] = (state.agent_pos[other].x - self.x) / spec.obs_range;
      obs[k++] = (state.agent_pos[other].y - self.y) / spec.obs_range;
      obs[k++] = state.agent_vel[other].x;
      obs[k++] = state.agent_vel[other].y;
    } else {
      write_masked_entity(obs, k, 2);
    }
    if (distance(self, state.box_pos) < spec.obs_range) {
      obs[k++] = 1.0;
      obs[k++] = (state.box_pos.x - self.x) / spec.obs_range;
      obs[k++] = (state.box_pos.y - self.y) / spec.obs_range;
      obs[k++] = state.box_vel.x;
      obs[k++] = state.box_vel.y;
    } else {
      write_masked_entity(obs, k, 2);
    }
    Vec2 lm = corner_position(state.landmark_corner);
    if (distance(self, lm) < spec.obs_range) {
      obs[k++] = 1.0;
      obs[k++] = static_cast<double>(state.landmark_corner);
    } else {
      obs[k++] = 0.0;
      obs[k++] = 0.0;
    }
  } else {
    if (other_visible) {
      obs[k++] = 1.0;
      obs[k++] = (state.agent_pos[other].x - self.x) / spec.obs_range;
      obs[k++] = (state.agent_pos[other].y - self.y) / spec.obs_range;
    } else {
      write_masked_entity(obs, k, 0);
    }
    for (const Landmark& lm : state.landmarks) {
      if (distance(self, lm.pos) < spec.obs_range) {
        obs[k++] = 1.0;
        obs[k++] = (lm.pos.x - self.x) / spec.obs_range;
        obs[k++] = (lm.pos.y - self.y) / spec.obs_range;
        obs[k++] = lm.color == LandmarkColor::red ? 1.0 : 0.0;
        obs[k++] = lm.color == LandmarkColor::blue ? 1.0 : 0.0;
        obs[k++] = lm.color == LandmarkColor::yellow ? 1.0 : 0.0;
      } else {
        write_masked_entity(obs, k, 3);
      }
    }
  }
  return obs;
}

std::pair<double, bool> box_push_reward(const ParticleWorldState& state, const ParticleParams& params) {
  Vec2 lm = corner_position(state.landmark_corner);
  if (distance(state.box_pos, lm) < params.landmark_radius) return {params.goal_reward, true};
  double reward = -params.step_penalty;
  for (std::size_t i = 0; i < state.agent_pos.size(); ++i)
    for (std::size_t j = i + 1; j < state.agent_pos.size(); ++j)
      if (distance(state.agent_pos[i], state.agent_pos[j]) < 2.0 * params.agent_radius)
        reward -= params.collision_penalty;
  return {reward, false};
}

double coordinated_placement_reward(const ParticleWorldState& state, const ParticleParams& params) {
  int on_color[3] = {0, 0, 0};
  for (const Vec2& pos : state.agent_pos) {
    double best = params.landmark_radius;
    int color = -1;
    for (const Landmark& lm : state.landmarks) {
      double d = distance(pos, lm.pos);
      if (d < best) {
        best = d;
        color = static_cast<int>(lm.color);
      }
    }
    if (color >= 0) ++on_color[color];
  }
  if (on_color[static_cast<int>(LandmarkColor::red)] == 2) return 10.0;
  if (on_color[static_cast<int>(LandmarkColor::blue)] == 2) return 2.0;
  if (on_color[static_cast<int>(LandmarkColor::yellow)] == 2) return 1.0;
  if (on_color[static_cast<int>(LandmarkColor::blue)] +
          on_color[static_cast<int>(LandmarkColor::yellow)] ==
      1)
    return 0.5;
  return 0.0;
}

ParticleEnv::ParticleEnv(ParticleTask task, ParticleParams params)
    : task_(task), params_(params) {
  spec_.task = task;
  spec_.obs_range = params.obs_range;
  state_.agent_pos.assign(2, {});
  state_.agent_vel.assign(2, {});
  if (task_ == ParticleTask::placement) state_.landmarks = placement_landmarks();
}

std::vector<double> ParticleEnv::global_state() const {
  std::vector<double> s;
  s.reserve(state_dim());
  for (std::size_t i = 0; i < 2; ++i) {
    s.push_back(state_.agent_pos[i].x);
    s.push_back(state_.agent_pos[i].y);
    s.push_back(state_.agent_vel[i].x);
    s.push_back(state_.agent_vel[i].y);
  }
  if (task_ == ParticleTask::box_push) {
    s.push_back(state_.box_pos.x);
    s.push_back(state_.box_pos.y);
    s.push_back(state_.box_vel.x);
    s.push_back(state_.box_vel.y);
    Vec2 lm = corner_position(state_.landmark_corner);
    s.push_back(lm.x);
    s.push_back(lm.y);
  }
  return s;
}

DecPomdpStep ParticleEnv::emit(double reward) const {
  DecPomdpStep out;
  out.joint_observation.reserve(2);
  for (std::size_t i = 0; i < 2; ++i) out.joint_observation.push_back(observe(state_, i, spec_));
  out.global_state = global_state();
  out.reward = reward;
  out.step_index = state_.t;
  out.done = done_;
  return out;
}

DecPomdpStep ParticleEnv::reset(numkit::SeededRng& rng) {
  state_.t = 0;
  state_.agent_vel.assign(2, {});
  state_.box_vel = {};
  if (task_ == ParticleTask::box_push) {
    for (std::size_t i = 0; i < 2; ++i) {
      state_.agent_pos[i].x = rng.uniform(-0.9, 0.9);
      state_.agent_pos[i].y = rng.uniform(-0.9, 0.9);
    }
    state_.box_pos.x = rng.uniform(-0.5, 0.5);
    state_.box_pos.y = rng.uniform(-0.5, 0.5);
    state_.landmark_corner = 1 + static_cast<int>(rng.uniform_int(4));
    state_.landmarks = {{corner_position(state_.landmark_corner), LandmarkColor::red}};
  } else {
    for (std::size_t i = 0; i < 2; ++i) {
      state_.agent_pos[i].x = rng.uniform(-1.0, 1.0);
      state_.agent_pos[i].y = 0.0;
    }
  }
  done_ = false;
  return emit(0.0);
}

DecPomdpStep ParticleEnv::step(const std::vector<int>& joint_action) {
  if (done_) throw DomainError("particle world: step on finished episode");
  if (joint_action.size() != 2) throw DomainError("particle world: action arity mismatch");

  // Forces from the pre-step configuration.
  std::vector<Vec2> force(2, Vec2{});
  Vec2 box_force{};
  Vec2 f01 = contact_force(state_.agent_pos[0], state_.agent_pos[1], params_.agent_radius,
                           params_.agent_radius, params_.contact_stiffness);
  force[0].x -= f01.x;
  force[0].y -= f01.y;
  force[1].x += f01.x;
  force[1].y += f01.y;
  if (task_ == ParticleTask::box_push) {
    for (std::size_t i = 0; i < 2; ++i) {
      Vec2 f = contact_force(state_.agent_pos[i], state_.box_pos, params_.agent_radius,
                             params_.box_radius, params_.contact_stiffness);
      force[i].x -= f.x;
      force[i].y -= f.y;
      box_force.x += f.x;
      box_force.y += f.y;
    }
  }

  for (std::size_t i = 0; i < 2; ++i) {
    Vec2 a = action_accel(joint_action[i], params_.accel);
    Vec2& v = state_.agent_vel[i];
    v.x = params_.damping * v.x + (a.x + force[i].x / params_.agent_mass) * params_.dt;
    v.y = params_.damping * v.y + (a.y + force[i].y / params_.agent_mass) * params_.dt;
    clamp_speed(v, params_.max_speed);
    state_.agent_pos[i].x += v.x * params_.dt;
    state_.agent_pos[i].y += v.y * params_.dt;
    clamp_walls(state_.agent_pos[i], v, params_.agent_radius);
  }
  if (task_ == ParticleTask::box_push) {
    Vec2& v = state_.box_vel;
    v.x = params_.damping * v.x + box_force.x / params_.box_mass * params_.dt;
    v.y = params_.damping * v.y + box_force.y / params_.box_mass * params_.dt;
    clamp_speed(v, params_.max_speed);
    state_.box_pos.x += v.x * params_.dt;
    state_.box_pos.y += v.y * params_.dt;
    clamp_walls(state_.box_pos, v, params_.box_radius);
  }

  ++state_.t;
  double reward = 0.0;
  if (task_ == ParticleTask::box_push) {
    auto [r, delivered] = box_push_reward(state_, params_);
    reward = r;
    done_ = delivered || state_.t >= params_.episode_length;
  } else {
    reward = coordinated_placement_reward(state_, params_);
    done_ = state_.t >= params_.episode_length;
  }
  return emit(reward);
}

}  // namespace marlx::envs
