#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "psc/config.hpp"
#include "psc/errors.hpp"
#include "psc/rng.hpp"

namespace psc {

struct LabeledSample {
  std::array<double, 18> x{};  // standardized features
  int label = 0;               // index into the label list
};

// One hidden layer, sigmoid units, softmax output. Weight layout is
// row-major: w1[h * inputs + i], w2[k * hidden + h].
struct MlpModel {
  int inputs = 0;
  int hidden = 0;
  int outputs = 0;
  std::vector<double> w1, b1, w2, b2;
  std::vector<std::string> labels;  // output unit k predicts labels[k]
  int epochs_run = 0;
  double final_loss = 0;

  std::vector<double> predict(std::span<const double> x) const {
    std::vector<double> h(static_cast<std::size_t>(hidden));
    for (int j = 0; j < hidden; ++j) {
      double a = b1[static_cast<std::size_t>(j)];
      for (int i = 0; i < inputs; ++i) {
        a += w1[static_cast<std::size_t>(j * inputs + i)] * x[static_cast<std::size_t>(i)];
      }
      h[static_cast<std::size_t>(j)] = 1.0 / (1.0 + std::exp(-a));
    }
    std::vector<double> p(static_cast<std::size_t>(outputs));
    double max_logit = -1e300;
    for (int k = 0; k < outputs; ++k) {
      double s = b2[static_cast<std::size_t>(k)];
      for (int j = 0; j < hidden; ++j) {
        s += w2[static_cast<std::size_t>(k * hidden + j)] * h[static_cast<std::size_t>(j)];
      }
      p[static_cast<std::size_t>(k)] = s;
      max_logit = std::max(max_logit, s);
    }
    double z = 0;
    for (double& s : p) {
      s = std::exp(s - max_logit);
      z += s;
    }
    for (double& s : p) s /= z;
    return p;
  }
};

struct MlpGradients {
  std::vector<double> w1, b1, w2, b2;
};

// Mean cross-entropy of the true labels under the model.
inline double mlp_loss(const MlpModel& m, const std::vector<LabeledSample>& samples) {
  double loss = 0;
  for (const auto& s : samples) {
    auto p = m.predict(std::span<const double>(s.x.data(), static_cast<std::size_t>(m.inputs)));
    loss -= std::log(std::max(p[static_cast<std::size_t>(s.label)], 1e-300));
  }
  return loss / static_cast<double>(samples.size());
}

// Full-batch gradients of mlp_loss by backpropagation.
inline MlpGradients mlp_gradients(const MlpModel& m,
                                  const std::vector<LabeledSample>& samples) {
  MlpGradients g;
  g.w1.assign(m.w1.size(), 0.0);
  g.b1.assign(m.b1.size(), 0.0);
  g.w2.assign(m.w2.size(), 0.0);
  g.b2.assign(m.b2.size(), 0.0);
  double inv_batch = 1.0 / static_cast<double>(samples.size());

  std::vector<double> h(static_cast<std::size_t>(m.hidden));
  std::vector<double> p(static_cast<std::size_t>(m.outputs));
  std::vector<double> dh(static_cast<std::size_t>(m.hidden));
  for (const auto& s : samples) {
    for (int j = 0; j < m.hidden; ++j) {
      double a = m.b1[static_cast<std::size_t>(j)];
      for (int i = 0; i < m.inputs; ++i) {
        a += m.w1[static_cast<std::size_t>(j * m.inputs + i)] * s.x[static_cast<std::size_t>(i)];
      }
      h[static_cast<std::size_t>(j)] = 1.0 / (1.0 + std::exp(-a));
    }
    double max_logit = -1e300;
    for (int k = 0; k < m.outputs; ++k) {
      double logit = m.b2[static_cast<std::size_t>(k)];
      for (int j = 0; j < m.hidden; ++j) {
        logit += m.w2[static_cast<std::size_t>(k * m.hidden + j)] * h[static_cast<std::size_t>(j)];
      }
      p[static_cast<std::size_t>(k)] = logit;
      max_logit = std::max(max_logit, logit);
    }
    double z = 0;
    for (double& v : p) {
      v = std::exp(v - max_logit);
      z += v;
    }
    for (double& v : p) v /= z;

    std::fill(dh.begin(), dh.end(), 0.0);
    for (int k = 0; k < m.outputs; ++k) {
      double delta = (p[static_cast<std::size_t>(k)] - (k == s.label ? 1.0 : 0.0)) * inv_batch;
      g.b2[static_cast<std::size_t>(k)] += delta;
      for (int j = 0; j < m.hidden; ++j) {
        g.w2[static_cast<std::size_t>(k * m.hidden + j)] += delta * h[static_cast<std::size_t>(j)];
        dh[static_cast<std::size_t>(j)] += delta * m.w2[static_cast<std::size_t>(k * m.hidden + j)];
      }
    }
    for (int j = 0; j < m.hidden; ++j) {
      double hj = h[static_cast<std::size_t>(j)];
      double delta = dh[static_cast<std::size_t>(j)] * hj * (1.0 - hj);
      g.b1[static_cast<std::size_t>(j)] += delta;
      for (int i = 0; i < m.inputs; ++i) {
        g.w1[static_cast<std::size_t>(j * m.inputs + i)] += delta * s.x[static_cast<std::size_t>(i)];
      }
    }
  }
  return g;
}

// Full-batch gradient descent from a seeded uniform [-0.5, 0.5] start.
// Training is a pure function of (samples, labels, config, seed).
inline MlpModel train_mlp(const std::vector<LabeledSample>& samples,
                          const std::vector<std::string>& labels,
                          const CascadeConfig& config, std::uint64_t seed) {
  if (labels.size() < 2) {
    throw InsufficientCandidates("training needs at least two candidate families");
  }
  if (samples.empty()) throw InsufficientData("training needs at least one row");
  std::vector<std::size_t> per_label(labels.size(), 0);
  for (const auto& s : samples) {
    if (s.label < 0 || static_cast<std::size_t>(s.label) >= labels.size()) {
      throw InsufficientData("sample label out of range");
    }
    per_label[static_cast<std::size_t>(s.label)]++;
  }
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (per_label[k] == 0) {
      throw InsufficientCandidates("candidate family '" + labels[k] + "' has no rows");
    }
  }

  MlpModel m;
  m.inputs = 18;
  m.hidden = config.hidden_units;
  m.outputs = static_cast<int>(labels.size());
  m.labels = labels;
  Rng rng(seed);
  auto init = [&](std::vector<double>& w, std::size_t n) {
    w.resize(n);
    for (double& v : w) v = rng.next_uniform(-0.5, 0.5);
  };
  init(m.w1, static_cast<std::size_t>(m.hidden * m.inputs));
  init(m.b1, static_cast<std::size_t>(m.hidden));
  init(m.w2, static_cast<std::size_t>(m.outputs * m.hidden));
  init(m.b2, static_cast<std::size_t>(m.outputs));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    auto g = mlp_gradients(m, samples);
    for (std::size_t i = 0; i < m.w1.size(); ++i) m.w1[i] -= config.learning_rate * g.w1[i];
    for (std::size_t i = 0; i < m.b1.size(); ++i) m.b1[i] -= config.learning_rate * g.b1[i];
    for (std::size_t i = 0; i < m.w2.size(); ++i) m.w2[i] -= config.learning_rate * g.w2[i];
    for (std::size_t i = 0; i < m.b2.size(); ++i) m.b2[i] -= config.learning_rate * g.b2[i];
  }
  m.epochs_run = config.epochs;
  m.final_loss = mlp_loss(m, samples);
  return m;
}

}  // namespace psc
