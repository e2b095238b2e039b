#include "psc/mlp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "psc/rng.hpp"

using namespace psc;

namespace {

std::vector<LabeledSample> two_blob_samples(int per_label, double gap, Rng& rng) {
  std::vector<LabeledSample> samples;
  for (int label = 0; label < 2; ++label) {
    for (int n = 0; n < per_label; ++n) {
      LabeledSample s;
      s.label = label;
      for (auto& v : s.x) {
        v = (label ? gap : -gap) + rng.next_uniform(-0.5, 0.5);
      }
      samples.push_back(s);
    }
  }
  return samples;
}

int predicted_label(const MlpModel& m, const LabeledSample& s) {
  auto p = m.predict(std::span<const double>(s.x.data(), s.x.size()));
  int best = 0;
  for (std::size_t k = 1; k < p.size(); ++k) {
    if (p[k] > p[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  }
  return best;
}

MlpModel random_model(int inputs, int hidden, int outputs, Rng& rng) {
  MlpModel m;
  m.inputs = inputs;
  m.hidden = hidden;
  m.outputs = outputs;
  auto fill = [&](std::vector<double>& w, std::size_t n) {
    w.resize(n);
    for (auto& v : w) v = rng.next_uniform(-0.8, 0.8);
  };
  fill(m.w1, static_cast<std::size_t>(hidden * inputs));
  fill(m.b1, static_cast<std::size_t>(hidden));
  fill(m.w2, static_cast<std::size_t>(outputs * hidden));
  fill(m.b2, static_cast<std::size_t>(outputs));
  for (int k = 0; k < outputs; ++k) m.labels.push_back("label" + std::to_string(k));
  return m;
}

}  // namespace

TEST(Mlp, PredictIsAProbabilityVector) {
  Rng rng(51);
  auto m = random_model(18, 6, 4, rng);
  LabeledSample s;
  for (auto& v : s.x) v = rng.next_uniform(-2.0, 2.0);
  auto p = m.predict(std::span<const double>(s.x.data(), s.x.size()));
  ASSERT_EQ(p.size(), 4u);
  double total = 0;
  for (double v : p) {
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
    total += v;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Mlp, LearnsASeparableProblem) {
  Rng rng(53);
  auto samples = two_blob_samples(20, 2.0, rng);
  CascadeConfig config;
  auto m = train_mlp(samples, {"minus", "plus"}, config, 99);
  int correct = 0;
  for (const auto& s : samples) correct += predicted_label(m, s) == s.label;
  EXPECT_EQ(correct, static_cast<int>(samples.size()));
  EXPECT_LT(m.final_loss, 0.1);
  EXPECT_EQ(m.epochs_run, config.epochs);
  EXPECT_EQ(m.outputs, 2);
  EXPECT_EQ(m.labels[0], "minus");
}

TEST(Mlp, TrainingLowersTheLoss) {
  Rng rng(57);
  auto samples = two_blob_samples(15, 1.0, rng);
  CascadeConfig config;
  config.epochs = 0;
  auto untrained = train_mlp(samples, {"a", "b"}, config, 7);
  config.epochs = 200;
  auto trained = train_mlp(samples, {"a", "b"}, config, 7);
  EXPECT_LT(trained.final_loss, untrained.final_loss * 0.5);
}

TEST(Mlp, DeterministicForSeed) {
  Rng rng(59);
  auto samples = two_blob_samples(10, 1.5, rng);
  CascadeConfig config;
  auto a = train_mlp(samples, {"a", "b"}, config, 1234);
  auto b = train_mlp(samples, {"a", "b"}, config, 1234);
  EXPECT_EQ(a.w1, b.w1);
  EXPECT_EQ(a.b1, b.b1);
  EXPECT_EQ(a.w2, b.w2);
  EXPECT_EQ(a.b2, b.b2);
  EXPECT_DOUBLE_EQ(a.final_loss, b.final_loss);

  auto c = train_mlp(samples, {"a", "b"}, config, 1235);
  EXPECT_NE(a.w1, c.w1);
}

TEST(Mlp, InitialWeightsStayInHalfUnitBox) {
  Rng rng(61);
  auto samples = two_blob_samples(5, 1.0, rng);
  CascadeConfig config;
  config.epochs = 0;
  auto m = train_mlp(samples, {"a", "b"}, config, 42);
  for (double v : m.w1) {
    EXPECT_GE(v, -0.5);
    EXPECT_LE(v, 0.5);
  }
  for (double v : m.w2) {
    EXPECT_GE(v, -0.5);
    EXPECT_LE(v, 0.5);
  }
}

TEST(Mlp, RefusesDegenerateTrainingSets) {
  Rng rng(63);
  auto samples = two_blob_samples(5, 1.0, rng);
  CascadeConfig config;
  EXPECT_THROW(train_mlp(samples, {"only"}, config, 1), InsufficientCandidates);
  EXPECT_THROW(train_mlp({}, {"a", "b"}, config, 1), InsufficientData);

  std::vector<LabeledSample> one_sided;
  for (const auto& s : samples) {
    if (s.label == 0) one_sided.push_back(s);
  }
  EXPECT_THROW(train_mlp(one_sided, {"a", "b"}, config, 1), InsufficientCandidates);
}

TEST(Mlp, GradientsMatchFiniteDifferences) {
  Rng rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    int hidden = 2 + static_cast<int>(rng.next_below(4));
    int outputs = 2 + static_cast<int>(rng.next_below(3));
    auto m = random_model(5, hidden, outputs, rng);

    std::vector<LabeledSample> samples;
    for (int n = 0; n < 6; ++n) {
      LabeledSample s;
      for (int i = 0; i < m.inputs; ++i) {
        s.x[static_cast<std::size_t>(i)] = rng.next_uniform(-1.5, 1.5);
      }
      s.label = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(outputs)));
      samples.push_back(s);
    }

    auto analytic = mlp_gradients(m, samples);
    auto numeric = oracle::numeric_gradients(m, samples);
    auto compare = [&](const std::vector<double>& a, const std::vector<double>& n) {
      ASSERT_EQ(a.size(), n.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        double rel = std::abs(a[i] - n[i]) / std::max(1.0, std::abs(a[i]) + std::abs(n[i]));
        EXPECT_LE(rel, 1e-4) << "param " << i;
      }
    };
    compare(analytic.w1, numeric.w1);
    compare(analytic.b1, numeric.b1);
    compare(analytic.w2, numeric.w2);
    compare(analytic.b2, numeric.b2);
  }
}

TEST(Mlp, GradientsUseOnlyDeclaredInputs) {
  // With inputs = 5 the trailing 13 slots of the 18-wide sample must be inert.
  Rng rng(71);
  auto m = random_model(5, 3, 2, rng);
  std::vector<LabeledSample> samples;
  for (int n = 0; n < 4; ++n) {
    LabeledSample s;
    for (auto& v : s.x) v = rng.next_uniform(-1.0, 1.0);
    s.label = n % 2;
    samples.push_back(s);
  }
  double loss = mlp_loss(m, samples);
  auto mutated = samples;
  for (auto& s : mutated) s.x[17] += 100.0;
  EXPECT_DOUBLE_EQ(loss, mlp_loss(m, mutated));
}
