#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "seqattract/errors.hpp"
#include "seqattract/experiments.hpp"
#include "seqattract/fixtures.hpp"
#include "seqattract/learning.hpp"

namespace seqattract {
namespace {

// Frozen numpy oracle: three hidden, four visible units, eta 0.25, kappa 1.
HiddenNetwork oracle_net() {
  RowMatrix P(3, 4), U(3, 4), V(4, 3);
  P << 0.6, -0.2, 0.1, 0.4,  //
      -0.5, 0.3, 0.8, -0.1,  //
      0.2, 0.9, -0.4, 0.3;
  U << 0.4, 0.1, -0.2, 0.3,  //
      0.05, -0.6, 0.3, 0.2,  //
      -0.1, 0.2, 0.7, -0.9;
  V << 0.5, -0.4, 0.2,  //
      0.1, 0.6, -0.3,   //
      -0.8, 0.2, 0.4,   //
      0.3, 0.3, 0.3;
  return HiddenNetwork(U, V, P);
}

Hyperparams oracle_hp() {
  Hyperparams hp;
  hp.eta = 0.25;
  hp.kappa = 1.0;
  return hp;
}

const BipolarVector kXt{1, -1, 1, 1};
const BipolarVector kXn{-1, 1, 1, -1};

void expect_matrix_near(const RowMatrix& got, const RowMatrix& want) {
  ASSERT_EQ(got.rows(), want.rows());
  ASSERT_EQ(got.cols(), want.cols());
  for (Eigen::Index r = 0; r < got.rows(); ++r)
    for (Eigen::Index c = 0; c < got.cols(); ++c) EXPECT_NEAR(got(r, c), want(r, c), 1e-12) << r << "," << c;
}

TEST(ProjectTarget, OracleWithAndWithoutThreshold) {
  RowMatrix P(4, 6);
  P << 0.3, -0.2, 0.5, -0.1, 0.4, -0.6,  //
      -0.7, 0.1, 0.2, 0.9, -0.3, 0.05,   //
      0.25, 0.25, -0.5, 0.5, -0.25, 0.75,  //
      -0.4, -0.8, 0.6, 0.2, 0.1, -0.3;
  const BipolarVector x{1, 1, -1, 1, -1, -1};
  EXPECT_EQ(project_target(P, x), (BipolarVector{-1, 1, 1, -1}));
  EXPECT_EQ(project_target(P, x, 0.5), (BipolarVector{-1, -1, 1, -1}));
}

TEST(ProjectTarget, ZeroProjectionGivesAllPlus) {
  EXPECT_EQ(project_target(RowMatrix::Zero(3, 2), BipolarVector{1, -1}), BipolarVector::ones(3));
}

TEST(ProjectTarget, IdentityCopiesInput) {
  const BipolarVector x{-1, 1, -1};
  EXPECT_EQ(project_target(RowMatrix::Identity(3, 3), x), x);
}

TEST(UpdateHidden, ZeroWeightsViolateEveryRow) {
  Rng rng(1);
  auto net = HiddenNetwork::random(4, 3, 0.0, rng);
  const auto mu = update_hidden_weights(net, kXt, kXn, oracle_hp());
  EXPECT_EQ(mu, (std::vector<std::uint8_t>{1, 1, 1}));
}

TEST(UpdateHidden, SatisfiedMarginIsNoOp) {
  auto net = oracle_net();
  // scale up until every hidden margin clears kappa
  const auto z = project_target(net.projection(), kXn);
  for (Eigen::Index i = 0; i < 3; ++i) net.hidden_weights().row(i) = 2.0 * z[static_cast<std::size_t>(i)] * kXt.as_double().transpose();
  const auto before = net;
  const auto mu = update_hidden_weights(net, kXt, kXn, oracle_hp());
  EXPECT_EQ(mu, (std::vector<std::uint8_t>{0, 0, 0}));
  EXPECT_EQ(net, before);
}

TEST(TrainPair, OracleAfterUpdateReadout) {
  auto net = oracle_net();
  const auto e = train_pair(net, kXt, kXn, oracle_hp());
  EXPECT_EQ(e.hidden, (std::vector<std::uint8_t>{1, 0, 1}));
  EXPECT_EQ(e.visible, (std::vector<std::uint8_t>{1, 1, 0, 1}));
  RowMatrix U3(3, 4), V3(4, 3);
  U3 << 0.15, 0.35, -0.45, 0.05,  //
      0.05, -0.6, 0.3, 0.2,       //
      0.15, -0.05, 0.95, -0.65;
  V3 << 0.75, -0.65, -0.05,  //
      -0.15, 0.85, -0.05,    //
      -0.8, 0.2, 0.4,        //
      0.55, 0.05, 0.05;
  expect_matrix_near(net.hidden_weights(), U3);
  expect_matrix_near(net.visible_weights(), V3);
  expect_matrix_near(net.projection(), oracle_net().projection());
}

TEST(TrainPair, BeforeUpdateReadoutUsesOldHiddenResponse) {
  auto net = oracle_net();
  TrainOptions opts;
  opts.readout = HiddenReadout::BeforeUpdate;
  const auto e = train_pair(net, kXt, kXn, oracle_hp(), opts);
  EXPECT_EQ(e.hidden, (std::vector<std::uint8_t>{1, 0, 1}));
  // y = (1, 1, -1) before the hidden update
  const Eigen::Vector3d y(1, 1, -1);
  RowMatrix V = oracle_net().visible_weights();
  const Eigen::Vector4d x = kXn.as_double();
  for (Eigen::Index j = 0; j < 4; ++j) {
    if (x(j) * V.row(j).dot(y) <= 1.0) V.row(j) += 0.25 * x(j) * y.transpose();
  }
  expect_matrix_near(net.visible_weights(), V);
}

TEST(TrainPair, UpdatesAreRowLocal) {
  // Each hidden row's update depends only on its own weights, its target and
  // the presynaptic input: training rows one at a time gives the same matrix.
  Rng rng(7);
  auto net = HiddenNetwork::random(6, 5, 0.3, rng);
  const auto x = BipolarVector{1, -1, -1, 1, 1, -1};
  const auto xn = BipolarVector{-1, -1, 1, 1, -1, 1};
  auto batched = net;
  update_hidden_weights(batched, x, xn, oracle_hp());
  for (Eigen::Index i = 0; i < 5; ++i) {
    RowMatrix U1 = net.hidden_weights().row(i);
    RowMatrix P1 = net.projection().row(i);
    HiddenNetwork single(U1, RowMatrix::Zero(6, 1), P1);
    update_hidden_weights(single, x, xn, oracle_hp());
    for (Eigen::Index k = 0; k < 6; ++k) EXPECT_DOUBLE_EQ(single.hidden_weights()(0, k), batched.hidden_weights()(i, k));
  }
}

TEST(TrainPair, SingleStepCorrectionWithNonNegativeMargin) {
  // kappa - m - eta N < 0 whenever m >= 0 and eta > kappa / N.
  Rng rng(11);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double kappa = 1.0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + static_cast<std::size_t>(rep % 15);
    Rng local(static_cast<std::uint64_t>(rep) + 100);
    auto x = BipolarVector::ones(n);
    auto xn = BipolarVector::ones(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (local() & 1) x.flip(k);
      if (local() & 1) xn.flip(k);
    }
    RowMatrix P = RowMatrix::Zero(1, static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) P(0, static_cast<Eigen::Index>(k)) = unit(rng);
    const double z = project_target(P, xn)[0];
    // choose U so that the margin lands in [0, kappa)
    const double m = kappa * std::abs(unit(rng)) * 0.999;
    RowMatrix U = (m / static_cast<double>(n)) * z * x.as_double().transpose();
    HiddenNetwork net(U, RowMatrix::Zero(static_cast<Eigen::Index>(n), 1), P);
    Hyperparams hp;
    hp.kappa = kappa;
    hp.eta = kappa / static_cast<double>(n) + 1e-9;
    ASSERT_EQ(update_hidden_weights(net, x, xn, hp)[0], 1);
    EXPECT_EQ(update_hidden_weights(net, x, xn, hp)[0], 0) << rep;
  }
}

TEST(TrainPair, RepeatedApplicationStoresTransition) {
  Rng rng(3);
  auto net = HiddenNetwork::random(8, 12, 1e-3, rng);
  const auto x = BipolarVector{1, -1, 1, 1, -1, -1, 1, -1};
  const auto xn = BipolarVector{-1, -1, 1, -1, 1, 1, 1, 1};
  Hyperparams hp;
  hp.eta = 0.05;
  int steps = 0;
  for (; steps < 1000; ++steps) {
    const auto e = train_pair(net, x, xn, hp);
    if (std::count(e.hidden.begin(), e.hidden.end(), 1) == 0 && std::count(e.visible.begin(), e.visible.end(), 1) == 0) break;
  }
  ASSERT_LT(steps, 1000);
  EXPECT_EQ(network_step(net, x).visible, xn);
  EXPECT_EQ(hidden_step(net, x), project_target(net.projection(), xn));
}

TEST(Train, ProjectionNeverChanges) {
  Rng rng(5);
  auto net = HiddenNetwork::random(10, 20, 1e-3, rng);
  const RowMatrix P = net.projection();
  Rng srng(6);
  const std::vector<PatternSequence> seqs{gen_random_periodic_sequence(10, 6, srng)};
  Hyperparams hp;
  hp.epochs = 50;
  train(net, seqs, hp);
  EXPECT_EQ(net.projection(), P);
}

TEST(Train, EpochErrorsSumOverPairs) {
  // Zero weights violate every margin: 4 pairs, M rows each, divided by M.
  Rng rng(2);
  auto net = HiddenNetwork::random(2, 8, 0.0, rng);
  const std::vector<PatternSequence> seqs{xor_sequence()};
  Hyperparams hp;
  hp.epochs = 1;
  const auto log = train(net, seqs, hp);
  ASSERT_EQ(log.per_epoch.size(), 1u);
  EXPECT_DOUBLE_EQ(log.per_epoch[0].hidden_error, 4.0);
  EXPECT_EQ(log.per_epoch[0].epoch_index, 1u);
  EXPECT_FALSE(log.converged_epoch);
  for (auto c : log.hidden_row_updates) EXPECT_EQ(c, 4u);
}

TEST(Train, ConvergesOnShortRandomSequenceAndStopsEarly) {
  Rng rng(21);
  auto net = HiddenNetwork::random(20, 60, 1e-3, rng);
  Rng srng(22);
  const std::vector<PatternSequence> seqs{gen_random_periodic_sequence(20, 6, srng)};
  Hyperparams hp;
  hp.epochs = 500;
  TrainOptions opts;
  opts.stop_when_converged = true;
  const auto log = train(net, seqs, hp, opts);
  ASSERT_TRUE(log.converged_epoch);
  EXPECT_EQ(log.per_epoch.size(), *log.converged_epoch);
  EXPECT_EQ(log.per_epoch.back().hidden_error, 0.0);
  EXPECT_EQ(log.per_epoch.back().visible_error, 0.0);
  EXPECT_TRUE(transitions_stored(net, seqs));
  // converged hidden responses equal the projected targets
  for (std::size_t t = 0; t + 1 < seqs[0].length(); ++t)
    EXPECT_EQ(hidden_step(net, seqs[0][t]), project_target(net.projection(), seqs[0][t + 1]));
}

TEST(Train, RejectsBadInputs) {
  auto net = HiddenNetwork::zeros(2, 3);
  Hyperparams hp;
  EXPECT_THROW(train(net, std::span<const PatternSequence>{}, hp), PreconditionError);
  const std::vector<PatternSequence> single{PatternSequence({BipolarVector{1, 1}}, false)};
  EXPECT_THROW(train(net, single, hp), PreconditionError);
  const std::vector<PatternSequence> wrong{PatternSequence::from_strings({"+++", "-+-"})};
  EXPECT_THROW(train(net, wrong, hp), ShapeError);
  hp.eta = 0.0;
  const std::vector<PatternSequence> ok{xor_sequence()};
  EXPECT_THROW(train(net, ok, hp), PreconditionError);
}

TEST(Train, VisibleOnlyLeavesHiddenWeights) {
  Rng rng(8);
  auto net = HiddenNetwork::random(10, 40, 1.0, rng);
  const RowMatrix U = net.hidden_weights();
  Rng srng(9);
  const std::vector<PatternSequence> seqs{gen_random_periodic_sequence(10, 5, srng)};
  Hyperparams hp;
  hp.epochs = 200;
  const auto log = train_visible_only(net, seqs, hp);
  EXPECT_EQ(net.hidden_weights(), U);
  for (const auto& e : log.per_epoch) EXPECT_EQ(e.hidden_error, 0.0);
}

TEST(Hebbian, OracleAndOrderIndependence) {
  RowMatrix U(2, 2);
  U << 1, 0, 0, -1;
  HiddenNetwork net(U, RowMatrix::Zero(2, 2), RowMatrix::Zero(2, 2));
  const auto a = PatternSequence::from_strings({"++", "+-", "-+"});
  const auto b = PatternSequence::from_strings({"--", "-+"});
  // y(++) = (+,-), y(+-) = (+,+), y(--) = (-,+)
  // V = x(+-) y(++)' + x(-+) y(+-)' + x(-+) y(--)'
  RowMatrix want(2, 2);
  want << 1 - 1 + 1, -1 - 1 - 1,  //
      -1 + 1 - 1, 1 + 1 + 1;
  std::vector<PatternSequence> ab{a, b}, ba{b, a};
  hebbian_visible_weights(net, ab);
  EXPECT_EQ(net.visible_weights(), want);
  hebbian_visible_weights(net, ba);
  EXPECT_EQ(net.visible_weights(), want);
}

TEST(Perceptron, CyclicShiftConverges) {
  const auto seq = PatternSequence::from_strings({"+---", "-+--", "--+-", "---+", "+---"});
  auto net = VisibleOnlyNetwork::zeros(4);
  const auto r = perceptron_train_visible_only(net, seq, 0.1, 1.0, 1000);
  ASSERT_TRUE(r.converged);
  for (std::size_t t = 0; t + 1 < seq.length(); ++t) EXPECT_EQ(visible_only_step(net, seq[t]), seq[t + 1]);
}

TEST(Perceptron, NonSeparableSequencesNeverConverge) {
  for (const auto& seq : {xor_sequence(), toy_sequence_a(), toy_sequence_b()}) {
    auto net = VisibleOnlyNetwork::zeros(seq.dim());
    EXPECT_FALSE(perceptron_train_visible_only(net, seq, 0.1, 1.0, 2000).converged);
  }
}

TEST(Perceptron, RejectsBadArguments) {
  auto net = VisibleOnlyNetwork::zeros(2);
  EXPECT_THROW(perceptron_train_visible_only(net, xor_sequence(), 0.1, 1.0, 0), PreconditionError);
  EXPECT_THROW(perceptron_train_visible_only(net, xor_sequence(), -0.1, 1.0, 5), PreconditionError);
  auto wide = VisibleOnlyNetwork::zeros(3);
  EXPECT_THROW(perceptron_train_visible_only(wide, xor_sequence(), 0.1, 1.0, 5), ShapeError);
}

TEST(Sparse, ZeroThresholdMatchesHiddenStep) {
  Rng rng(4);
  const auto net = HiddenNetwork::random(12, 30, 1.0, rng);
  const BipolarVector x = BipolarVector::from_string("+-+--++-+--+");
  EXPECT_EQ(hidden_step_sparse(net, x, 0.0), hidden_step(net, x));
  EXPECT_EQ(hidden_step_sparse(net, x, 1e6), BipolarVector::ones(30).negated());
}

TEST(Sparse, ThresholdCalibratesActivity) {
  // With U ~ N(0,1) and N = 100 the pre-activation is N(0, 100); a threshold
  // of 12.8 leaves about 10% of units at +1.
  Rng rng(12);
  auto net = HiddenNetwork::random(100, 2000, 1.0, rng);
  Rng xr(13);
  auto x = BipolarVector::ones(100);
  for (std::size_t k = 0; k < 100; ++k)
    if (xr() & 1) x.flip(k);
  const double theta = 12.8155;
  apply_hidden_threshold(net, theta);
  const auto y = hidden_step(net, x);
  const auto active = std::count(y.entries().begin(), y.entries().end(), Bipolar{1});
  EXPECT_NEAR(static_cast<double>(active) / 2000.0, 0.10, 0.03);
  EXPECT_THROW(apply_hidden_threshold(net, -1.0), PreconditionError);
}

TEST(Hyperparams, Validation) {
  Hyperparams hp;
  EXPECT_NO_THROW(hp.validate());
  hp.kappa = 0.0;
  EXPECT_THROW(hp.validate(), PreconditionError);
  hp = {};
  hp.epochs = 0;
  EXPECT_THROW(hp.validate(), PreconditionError);
  hp = {};
  hp.theta = std::nan("");
  EXPECT_THROW(hp.validate(), PreconditionError);
}

}  // namespace
}  // namespace seqattract
