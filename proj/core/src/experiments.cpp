#include "seqattract/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "seqattract/errors.hpp"

namespace seqattract {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t coord(SeedStream s) { return static_cast<std::uint64_t>(s); }

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t c : coords) h = splitmix64(h ^ splitmix64(c + 0x632BE59BD9B4E019ULL));
  return h;
}

PatternSequence gen_random_periodic_sequence(std::size_t n, std::size_t t, Rng& rng) {
  if (n < 1) throw PreconditionError("gen_random_periodic_sequence: N must be >= 1");
  if (t < 2) throw PreconditionError("gen_random_periodic_sequence: T must be >= 2");
  if (n < 63 && t - 1 > (std::size_t{1} << n)) {
    throw PreconditionError(fmt::format(
        "gen_random_periodic_sequence: {} distinct patterns requested but only {} exist for N={}", t - 1,
        std::size_t{1} << n, n));
  }
  std::vector<BipolarVector> pats;
  pats.reserve(t);
  while (pats.size() < t - 1) {
    std::vector<Bipolar> v(n);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 64 == 0) bits = rng();
      v[i] = (bits >> (i % 64)) & 1U ? Bipolar{1} : Bipolar{-1};
    }
    BipolarVector candidate(std::move(v));
    if (std::find(pats.begin(), pats.end(), candidate) == pats.end()) pats.push_back(std::move(candidate));
  }
  pats.push_back(pats.front());
  return PatternSequence(std::move(pats), true);
}

BipolarVector salt_pepper(const BipolarVector& x, std::size_t k, Rng& rng) {
  const std::size_t n = x.dim();
  if (k > n) throw PreconditionError(fmt::format("salt_pepper: cannot flip {} of {} entries", k, n));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  BipolarVector out = x;
  // partial Fisher-Yates: idx[0..k) is a uniform k-subset
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
    out.flip(idx[i]);
  }
  return out;
}

std::size_t default_max_steps(std::size_t period) { return 2 * period + 10; }

TrialOutcome retrieval_trial(const HiddenNetwork& net, const PatternSequence& sequence, std::size_t k_flips,
                             std::optional<std::size_t> max_steps, std::uint64_t seed,
                             Trajectory* trajectory_out) {
  if (sequence.dim() != net.visible_dim()) {
    throw ShapeError(fmt::format("retrieval_trial: sequence dim {} != network N {}", sequence.dim(),
                                 net.visible_dim()));
  }
  const std::size_t steps = max_steps.value_or(default_max_steps(sequence.length()));
  if (steps + 1 < sequence.length()) {
    throw PreconditionError(fmt::format("retrieval_trial: {} steps cannot contain a sequence of length {}",
                                        steps, sequence.length()));
  }
  Rng rng(seed);
  BipolarVector init = salt_pepper(sequence[0], k_flips, rng);
  Trajectory traj = run_free(net, init, steps);
  TrialOutcome out;
  out.tau = detect_alignment(traj, sequence);
  out.success = out.tau.has_value();
  out.flips_applied = k_flips;
  out.seed = seed;
  if (trajectory_out) *trajectory_out = std::move(traj);
  return out;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::VisibleOnly: return "V_only";
    case Method::Joint: return "joint";
    case Method::Hebbian: return "hebbian";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  if (s == "V_only" || s == "v_only") return Method::VisibleOnly;
  if (s == "joint") return Method::Joint;
  if (s == "hebbian") return Method::Hebbian;
  throw PreconditionError(fmt::format("unknown method '{}' (expected V_only, joint or hebbian)", s));
}

std::string_view to_string(SweepAxis a) { return a == SweepAxis::Period ? "T" : "M"; }

TrainingLog fit(Method method, HiddenNetwork& net, std::span<const PatternSequence> sequences,
                const Hyperparams& hp, const TrainOptions& opts) {
  switch (method) {
    case Method::Joint: return train(net, sequences, hp, opts);
    case Method::VisibleOnly: return train_visible_only(net, sequences, hp, opts);
    case Method::Hebbian: hebbian_visible_weights(net, sequences); return {};
  }
  return {};
}

bool transitions_stored(const HiddenNetwork& net, std::span<const PatternSequence> sequences) {
  for (const auto& seq : sequences) {
    for (std::size_t t = 0; t + 1 < seq.length(); ++t) {
      if (!(network_step(net, seq[t]).visible == seq[t + 1])) return false;
    }
  }
  return true;
}

TrialRecord capacity_trial(std::size_t n, std::size_t m, std::size_t t, Method method, const Hyperparams& hp,
                           std::size_t flips, std::optional<std::size_t> max_steps, std::uint64_t master_seed,
                           std::size_t trial) {
  Rng seq_rng(derive_seed(master_seed, {coord(SeedStream::Sequence), n, t, trial}));
  const PatternSequence seq = gen_random_periodic_sequence(n, t, seq_rng);
  Rng init_rng(derive_seed(master_seed, {coord(SeedStream::Init), n, m, t, trial}));
  HiddenNetwork net = HiddenNetwork::random(n, m, hp.init_std, init_rng);

  // An epoch without violations changes no weight, so every later epoch
  // would repeat it: stopping there gives the same network as running on.
  TrainOptions opts;
  opts.stop_when_converged = true;
  const std::span<const PatternSequence> data(&seq, 1);
  const TrainingLog log = fit(method, net, data, hp, opts);

  TrialRecord rec;
  rec.converged_epoch = log.converged_epoch;
  rec.converged = log.converged_epoch.has_value();
  rec.stored = transitions_stored(net, data);
  const TrialOutcome outcome = retrieval_trial(
      net, seq, flips, max_steps, derive_seed(master_seed, {coord(SeedStream::Noise), n, t, trial}));
  rec.success = outcome.success;
  rec.tau = outcome.tau;
  return rec;
}

std::vector<SweepTable> capacity_sweep(const SweepConfig& config) {
  config.hp.validate();
  if (config.values.empty()) throw PreconditionError("capacity_sweep: empty grid");
  if (config.methods.empty()) throw PreconditionError("capacity_sweep: no methods");
  if (config.trials < 1) throw PreconditionError("capacity_sweep: trials must be >= 1");
  for (std::size_t i = 1; i < config.values.size(); ++i) {
    if (config.values[i] <= config.values[i - 1]) {
      throw PreconditionError("capacity_sweep: grid values must be strictly increasing");
    }
  }

  const std::size_t cells = config.values.size();
  const std::size_t methods = config.methods.size();
  const std::size_t total = cells * methods * config.trials;
  std::vector<TrialRecord> records(total);

  parallel_for(total, config.jobs, [&](std::size_t task) {
    const std::size_t trial = task % config.trials;
    const std::size_t method_idx = (task / config.trials) % methods;
    const std::size_t cell = task / (config.trials * methods);
    const std::size_t value = config.values[cell];
    const std::size_t m = config.axis == SweepAxis::Hidden ? value : config.hidden;
    const std::size_t t = config.axis == SweepAxis::Period ? value : config.period;
    records[task] = capacity_trial(config.visible, m, t, config.methods[method_idx], config.hp, config.flips,
                                   config.max_steps, config.master_seed, trial);
  });

  std::vector<SweepTable> tables(methods);
  for (std::size_t k = 0; k < methods; ++k) {
    SweepTable& tab = tables[k];
    tab.axis = config.axis;
    tab.method = config.methods[k];
    tab.axis_values = config.values;
    tab.trials = config.trials;
    tab.success_counts.assign(cells, 0);
    tab.converged_counts.assign(cells, 0);
    tab.stored_counts.assign(cells, 0);
    for (std::size_t c = 0; c < cells; ++c) {
      for (std::size_t r = 0; r < config.trials; ++r) {
        const TrialRecord& rec = records[(c * methods + k) * config.trials + r];
        tab.success_counts[c] += rec.success;
        tab.converged_counts[c] += rec.converged;
        tab.stored_counts[c] += rec.stored;
      }
    }
  }
  return tables;
}

std::vector<SweepTable> capacity_sweep_T(std::size_t n, std::size_t m, std::vector<std::size_t> periods,
                                         std::size_t trials, std::vector<Method> methods,
                                         const Hyperparams& hp, std::uint64_t seed, unsigned jobs) {
  SweepConfig c;
  c.axis = SweepAxis::Period;
  c.values = std::move(periods);
  c.visible = n;
  c.hidden = m;
  c.trials = trials;
  c.methods = std::move(methods);
  c.hp = hp;
  c.master_seed = seed;
  c.jobs = jobs;
  return capacity_sweep(c);
}

std::vector<SweepTable> capacity_sweep_M(std::size_t n, std::size_t t, std::vector<std::size_t> hidden_sizes,
                                         std::size_t trials, std::vector<Method> methods,
                                         const Hyperparams& hp, std::uint64_t seed, unsigned jobs) {
  SweepConfig c;
  c.axis = SweepAxis::Hidden;
  c.values = std::move(hidden_sizes);
  c.visible = n;
  c.period = t;
  c.trials = trials;
  c.methods = std::move(methods);
  c.hp = hp;
  c.master_seed = seed;
  c.jobs = jobs;
  return capacity_sweep(c);
}

std::vector<ErrorCurveRow> error_curves(const TrainingLog& log) {
  std::vector<ErrorCurveRow> rows;
  rows.reserve(log.per_epoch.size());
  for (const auto& e : log.per_epoch) rows.push_back({e.epoch_index, e.hidden_error, e.visible_error});
  return rows;
}

std::vector<AblationReport> ablation_grid(std::span<const PatternSequence> sequences,
                                          const AblationConfig& config) {
  config.hp.validate();
  if (sequences.empty()) throw PreconditionError("ablation_grid: no sequences");
  if (config.methods.empty() || config.thetas.empty()) {
    throw PreconditionError("ablation_grid: methods and thetas must be non-empty");
  }
  const std::size_t n = sequences.front().dim();
  const std::size_t m = config.hidden;
  const std::size_t combos = config.methods.size() * config.thetas.size();
  std::vector<AblationReport> reports(combos);

  parallel_for(combos, config.jobs, [&](std::size_t c) {
    const Method method = config.methods[c / config.thetas.size()];
    const double theta = config.thetas[c % config.thetas.size()];

    Rng init_rng(derive_seed(config.seed, {coord(SeedStream::Init), n, m}));
    HiddenNetwork net = HiddenNetwork::random(n, m, config.hp.init_std, init_rng);
    Hyperparams hp = config.hp;
    if (method == Method::Joint) {
      hp.theta = theta;
    } else {
      Rng fixed_rng(derive_seed(config.seed, {coord(SeedStream::FixedHidden), n, m}));
      std::normal_distribution<double> normal(0.0, 1.0);
      auto& U = net.hidden_weights();
      for (Eigen::Index i = 0; i < U.rows(); ++i) {
        for (Eigen::Index j = 0; j < U.cols(); ++j) U(i, j) = normal(fixed_rng);
      }
      apply_hidden_threshold(net, theta);
      hp.theta = 0.0;
    }

    TrainOptions opts;
    opts.stop_when_converged = true;
    const TrainingLog log = fit(method, net, sequences, hp, opts);

    AblationReport rep;
    rep.method = method;
    rep.theta = theta;
    rep.converged = log.converged_epoch.has_value();
    rep.stored = transitions_stored(net, sequences);

    std::size_t active = 0;
    std::size_t total_units = 0;
    for (const auto& seq : sequences) {
      for (const auto& x : seq.patterns()) {
        const BipolarVector h = hidden_step(net, x);
        for (std::size_t i = 0; i < h.dim(); ++i) active += h[i] > 0;
        total_units += h.dim();
      }
    }
    rep.hidden_activity = static_cast<double>(active) / static_cast<double>(total_units);

    for (std::size_t s = 0; s < sequences.size(); ++s) {
      for (std::size_t r = 0; r < config.trials; ++r) {
        const std::uint64_t seed = derive_seed(config.seed, {coord(SeedStream::Noise), s, r});
        Trajectory* sample = (s == 0 && r == 0) ? &rep.sample : nullptr;
        const TrialOutcome out = retrieval_trial(net, sequences[s], config.flips, config.max_steps, seed, sample);
        rep.successes += out.success;
        ++rep.attempts;
      }
    }
    reports[c] = std::move(rep);
  });
  return reports;
}

}  // namespace seqattract
