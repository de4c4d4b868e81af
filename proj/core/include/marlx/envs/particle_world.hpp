#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "marlx/envs/dec_pomdp.hpp"

namespace marlx::envs {

enum class ParticleTask { box_push, placement };
enum class LandmarkColor { red = 0, blue = 1, yellow = 2 };

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Point-mass dynamics and task constants for the 2x2 m walled arena.
struct ParticleParams {
  double damping = 0.75;
  double accel = 5.0;      // control acceleration, m/s^2
  double dt = 0.1;         // integration step, s
  double max_speed = 1.0;  // m/s
  double agent_radius = 0.05;
  double box_radius = 0.15;
  double landmark_radius = 0.15;
  double contact_stiffness = 200.0;  // spring constant of the overlap repulsion
  double agent_mass = 1.0;
  double box_mass = 2.0;
  double obs_range = 0.6;  // 2.83 = fully observable in a 2x2 arena
  double step_penalty = 0.1;
  double collision_penalty = 2.0;
  double goal_reward = 100.0;
  std::size_t episode_length = 100;
};

struct Landmark {
  Vec2 pos;
  LandmarkColor color = LandmarkColor::red;
};

struct ParticleWorldState {
  std::vector<Vec2> agent_pos;
  std::vector<Vec2> agent_vel;
  Vec2 box_pos;  // box_push only
  Vec2 box_vel;
  int landmark_corner = 1;          // box_push: 1..4
  std::vector<Landmark> landmarks;  // box_push: the corner landmark; placement: six fixed
  std::size_t t = 0;
};

/// Field layout of one agent's observation. Entities farther than obs_range
/// are masked: visibility 0, relative positions 1, velocities 0, landmark
/// corner/colors 0. Visible relative positions are divided by obs_range.
struct ObservationSpec {
  ParticleTask task = ParticleTask::box_push;
  double obs_range = 0.6;
  std::size_t n_agents = 2;

  std::size_t dimension() const {
    return task == ParticleTask::box_push ? 16 : 7 + 6 * 6;
  }
};

std::vector<double> observe(const ParticleWorldState& state, std::size_t agent_id,
                            const ObservationSpec& spec);

/// (reward, delivered). Delivery pays the goal reward alone; otherwise the
/// step penalty plus the collision penalty per overlapping agent pair.
std::pair<double, bool> box_push_reward(const ParticleWorldState& state, const ParticleParams& params);

/// Reward table over landmark occupancy: both-red 10, both-blue 2,
/// both-yellow 1, exactly one agent on blue-or-yellow 0.5, else 0.
double coordinated_placement_reward(const ParticleWorldState& state, const ParticleParams& params);

/// Fixed landmark layout for the placement task: two columns of red/blue/
/// yellow landmarks, the blue ones sitting on the agents' spawn line.
std::vector<Landmark> placement_landmarks();

Vec2 corner_position(int corner);

class ParticleEnv final : public Env {
public:
  enum Action { north = 0, south = 1, east = 2, west = 3, stay = 4 };

  ParticleEnv(ParticleTask task, ParticleParams params);

  std::size_t n_agents() const override { return 2; }
  std::size_t n_actions() const override { return 5; }
  std::size_t obs_dim() const override { return spec_.dimension(); }
  std::size_t state_dim() const override { return task_ == ParticleTask::box_push ? 14 : 8; }

  DecPomdpStep reset(numkit::SeededRng& rng) override;
  DecPomdpStep step(const std::vector<int>& joint_action) override;

  const ParticleWorldState& state() const { return state_; }
  ParticleWorldState& state_mut() { return state_; }
  const ParticleParams& params() const { return params_; }
  ParticleTask task() const { return task_; }

private:
  DecPomdpStep emit(double reward) const;
  std::vector<double> global_state() const;

  ParticleTask task_;
  ParticleParams params_;
  ObservationSpec spec_;
  ParticleWorldState state_;
  bool done_ = true;
};

}  // namespace marlx::envs
