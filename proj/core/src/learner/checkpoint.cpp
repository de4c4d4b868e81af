#include "marlx/learner/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "marlx/errors.hpp"

namespace marlx::learner {

using numkit::Matrix;
using numkit::Mlp;

namespace {

void write_tensor(std::ostream& out, const std::string& name, const Matrix& m) {
  out << "tensor " << name << ' ' << m.rows << ' ' << m.cols << '\n';
  char buf[48];
  for (std::size_t i = 0; i < m.rows; ++i) {
    const double* row = m.row(i);
    for (std::size_t j = 0; j < m.cols; ++j) {
      std::snprintf(buf, sizeof buf, "%a", row[j]);
      out << buf << (j + 1 == m.cols ? "" : " ");
    }
    out << '\n';
  }
}

Matrix bias_matrix(const std::vector<double>& b) {
  Matrix m(1, b.size());
  std::copy(b.begin(), b.end(), m.row(0));
  return m;
}

void write_net(std::ostream& out, const std::string& prefix, const Mlp& net) {
  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    write_tensor(out, prefix + ".w" + std::to_string(l), net.weight(l));
    write_tensor(out, prefix + ".b" + std::to_string(l), bias_matrix(net.bias(l)));
  }
}

void load_net(const CheckpointData& data, const std::string& prefix, Mlp& net) {
  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    auto wit = data.tensors.find(prefix + ".w" + std::to_string(l));
    auto bit = data.tensors.find(prefix + ".b" + std::to_string(l));
    if (wit == data.tensors.end() || bit == data.tensors.end())
      throw ConfigError("checkpoint: missing tensor for " + prefix + " layer " + std::to_string(l));
    if (!wit->second.same_shape(net.weight(l)) || bit->second.cols != net.bias(l).size())
      throw ShapeError("checkpoint: tensor shape mismatch for " + prefix);
    net.weight_mut(l) = wit->second;
    std::vector<double>& b = net.bias_mut(l);
    std::copy(bit->second.row(0), bit->second.row(0) + bit->second.cols, b.begin());
  }
}

}  // namespace

void write_checkpoint(std::ostream& out, const QmixLearner& learner,
                      const std::vector<std::string>& env_meta) {
  out << "marlx-checkpoint v1\n";
  out << "dims " << learner.n_agents() << ' ' << learner.obs_dim() << ' ' << learner.n_actions()
      << ' ' << learner.state_dim() << '\n';
  out << "agent_hidden";
  for (std::size_t h : learner.config().agent_hidden) out << ' ' << h;
  out << '\n';
  out << "mixer_embed " << learner.config().mixer_embed << '\n';
  out << "env_begin\n";
  for (const std::string& line : env_meta) out << line << '\n';
  out << "env_end\n";
  write_net(out, "agent", learner.agent_net());
  write_net(out, "mixer.hw1", learner.mixer().hyper_w1());
  write_net(out, "mixer.hb1", learner.mixer().hyper_b1());
  write_net(out, "mixer.hw2", learner.mixer().hyper_w2());
  write_net(out, "mixer.hb2", learner.mixer().hyper_b2());
  out << "end\n";
}

CheckpointData read_checkpoint(std::istream& in) {
  CheckpointData data;
  std::string line;
  if (!std::getline(in, line) || line != "marlx-checkpoint v1")
    throw ConfigError("checkpoint: bad or missing header");

  while (std::getline(in, line)) {
    if (line == "end") return data;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "dims") {
      ls >> data.n_agents >> data.obs_dim >> data.n_actions >> data.state_dim;
    } else if (tag == "agent_hidden") {
      std::size_t h;
      while (ls >> h) data.agent_hidden.push_back(h);
    } else if (tag == "mixer_embed") {
      ls >> data.mixer_embed;
    } else if (tag == "env_begin") {
      while (std::getline(in, line) && line != "env_end") data.env_meta.push_back(line);
    } else if (tag == "tensor") {
      std::string name;
      std::size_t rows = 0, cols = 0;
      ls >> name >> rows >> cols;
      Matrix m(rows, cols);
      for (std::size_t i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) throw ConfigError("checkpoint: truncated tensor " + name);
        const char* p = line.c_str();
        char* endp = nullptr;
        for (std::size_t j = 0; j < cols; ++j) {
          m(i, j) = std::strtod(p, &endp);
          if (endp == p) throw ConfigError("checkpoint: malformed value in tensor " + name);
          p = endp;
        }
      }
      data.tensors.emplace(std::move(name), std::move(m));
    } else if (!tag.empty()) {
      throw ConfigError("checkpoint: unknown line: " + line);
    }
  }
  throw ConfigError("checkpoint: missing end marker");
}

QmixLearner learner_from_checkpoint(const CheckpointData& data, TrainConfig cfg) {
  cfg.agent_hidden = data.agent_hidden;
  cfg.mixer_embed = data.mixer_embed;
  numkit::SeededRng rng(0);
  QmixLearner learner(data.n_agents, data.obs_dim, data.n_actions, data.state_dim, cfg, rng);
  load_net(data, "agent", learner.agent_net());
  load_net(data, "mixer.hw1", learner.mixer().hyper_w1());
  load_net(data, "mixer.hb1", learner.mixer().hyper_b1());
  load_net(data, "mixer.hw2", learner.mixer().hyper_w2());
  load_net(data, "mixer.hb2", learner.mixer().hyper_b2());
  learner.sync_targets();
  return learner;
}

}  // namespace marlx::learner
