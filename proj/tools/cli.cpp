#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "seqattract/data_io.hpp"
#include "seqattract/errors.hpp"
#include "seqattract/experiments.hpp"
#include "seqattract/fixtures.hpp"

namespace seqattract::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::uint64_t seed = 0;
  bool seed_given = false;
  unsigned jobs = 0;
  std::string out = ".";
  Hyperparams hp;
  bool learn_bias = false;
  int binarize_threshold = 128;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
};

void add_common(CLI::App* cmd, Common& c, bool training) {
  cmd->add_option("--seed", c.seed, "Master seed (falls back to $SEQATTRACT_SEED, then 0)")
      ->each([&c](const std::string&) { c.seed_given = true; });
  cmd->add_option("--jobs", c.jobs, "Worker threads (0 = all cores)");
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_option("--binarize-threshold", c.binarize_threshold, "Threshold for .pgm inputs")
      ->capture_default_str();
  if (!training) return;
  cmd->add_option("--eta", c.hp.eta, "Learning rate")->capture_default_str();
  cmd->add_option("--kappa", c.hp.kappa, "Required margin")->capture_default_str();
  cmd->add_option("--epochs", c.hp.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--init-std", c.hp.init_std, "Std of the initial weights")->capture_default_str();
  cmd->add_option("--theta", c.hp.theta, "Sparsity threshold on projected targets")->capture_default_str();
  cmd->add_flag("--learn-bias", c.learn_bias, "Learn hidden and visible biases");
}

void resolve_seed(Common& c) {
  if (c.seed_given) return;
  const char* env = std::getenv("SEQATTRACT_SEED");
  if (env == nullptr || *env == '\0') return;
  try {
    std::size_t used = 0;
    c.seed = std::stoull(env, &used);
    if (used != std::string_view(env).size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw PreconditionError(fmt::format("SEQATTRACT_SEED='{}' is not an unsigned integer", env));
  }
}

fs::path prepare_out(const Common& c) {
  const fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError(fmt::format("cannot create output directory {}", dir.string()));
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  const auto back = read_file(path);
  if (back.size() != text.size() || !std::equal(back.begin(), back.end(), text.begin())) {
    throw IoError(fmt::format("verification failed for {}", path.string()));
  }
}

void write_csv(const fs::path& path, const CsvTable& table) { write_text(path, table.render()); }

void write_manifest(const fs::path& path, const std::string& command, const Common& c,
                    std::map<std::string, std::string> settings) {
  RunManifest m;
  m.command = command;
  m.seed = c.seed;
  m.hp = c.hp;
  settings["learn_bias"] = c.learn_bias ? "true" : "false";
  m.settings = std::move(settings);
  write_text(path, render_manifest(m));
}

void write_checkpoint_verified(const HiddenNetwork& net, const fs::path& path) {
  save_checkpoint(net, path);
  if (!(load_checkpoint(path) == net)) throw IoError(fmt::format("verification failed for {}", path.string()));
}

PatternSequence load_input(const std::string& path, int threshold) {
  if (fs::path(path).extension() == ".pgm") {
    const auto frames = load_pgm_frames(path);
    return binarize_frames(frames, threshold);
  }
  return load_sequence(path);
}

std::vector<PatternSequence> load_inputs(const std::vector<std::string>& paths, int threshold) {
  std::vector<PatternSequence> seqs;
  for (const auto& p : paths) seqs.push_back(load_input(p, threshold));
  for (const auto& s : seqs) {
    if (s.dim() != seqs.front().dim()) {
      throw ShapeError(fmt::format("input sequences differ in N ({} vs {})", s.dim(), seqs.front().dim()));
    }
  }
  return seqs;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : " ") + fmt::format("{}", x);
  return s;
}

std::string max_steps_text(const std::optional<std::size_t>& m) {
  return m ? std::to_string(*m) : std::string("2T+10");
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::vector<std::string> inputs;
  std::size_t hidden = 500;
  std::string method = "joint";
  std::string checkpoint = "model.satn";
  bool stop_early = false;
};

int cmd_train(Context& ctx, Common& c, const TrainArgs& a) {
  c.hp.validate();
  const Method method = parse_method(a.method);
  if (a.hidden < 1) throw PreconditionError("--hidden must be >= 1");
  const auto seqs = load_inputs(a.inputs, c.binarize_threshold);
  const fs::path dir = prepare_out(c);
  const std::size_t n = seqs.front().dim();

  Rng init(derive_seed(c.seed, {static_cast<std::uint64_t>(SeedStream::Init), n, a.hidden}));
  HiddenNetwork net = HiddenNetwork::random(n, a.hidden, c.hp.init_std, init);
  TrainOptions opts;
  opts.learn_bias = c.learn_bias;
  opts.stop_when_converged = a.stop_early;
  const TrainingLog log = fit(method, net, seqs, c.hp, opts);

  const fs::path ckpt = fs::path(a.checkpoint).is_absolute() ? fs::path(a.checkpoint) : dir / a.checkpoint;
  write_checkpoint_verified(net, ckpt);
  CsvTable table({"epoch", "hidden_error", "visible_error"});
  for (const auto& row : error_curves(log)) {
    table.add_row({std::to_string(row.epoch), format_double(row.hidden_error), format_double(row.visible_error)});
  }
  write_csv(dir / "train_log.csv", table);
  write_manifest(dir / "train_log.manifest.json", "train", c,
                 {{"method", std::string(to_string(method))},
                  {"hidden", std::to_string(a.hidden)},
                  {"inputs", join(a.inputs)},
                  {"stop_early", a.stop_early ? "true" : "false"}});
  save_timestamp(dir / "run_timestamp.json");

  const bool stored = transitions_stored(net, seqs);
  ctx.out << fmt::format("trained {} network N={} M={} on {} sequence(s)\n", to_string(method), n, a.hidden,
                         seqs.size());
  if (log.converged_epoch) {
    ctx.out << fmt::format("converged at epoch {}\n", *log.converged_epoch);
  } else if (method != Method::Hebbian) {
    ctx.out << "did not converge\n";
  }
  ctx.out << fmt::format("all transitions stored: {}\ncheckpoint: {}\n", stored ? "yes" : "no", ckpt.string());
  return kOk;
}

struct RetrieveArgs {
  std::string checkpoint;
  std::string input;
  std::size_t flips = 0;
  std::size_t trials = 1;
  std::optional<std::size_t> max_steps;
};

int cmd_retrieve(Context& ctx, Common& c, const RetrieveArgs& a) {
  const HiddenNetwork net = load_checkpoint(a.checkpoint);
  const PatternSequence seq = load_input(a.input, c.binarize_threshold);
  if (a.flips > seq.dim()) {
    throw PreconditionError(fmt::format("--flips {} exceeds N = {}", a.flips, seq.dim()));
  }
  if (a.trials < 1) throw PreconditionError("--trials must be >= 1");
  const fs::path dir = prepare_out(c);

  CsvTable traj({"trial", "step", "state"});
  nlohmann::json outcomes = nlohmann::json::array();
  std::size_t successes = 0;
  for (std::size_t trial = 0; trial < a.trials; ++trial) {
    const std::uint64_t seed = derive_seed(c.seed, {static_cast<std::uint64_t>(SeedStream::Noise), trial});
    Trajectory tr;
    const TrialOutcome o = retrieval_trial(net, seq, a.flips, a.max_steps, seed, &tr);
    successes += o.success;
    for (std::size_t s = 0; s < tr.states.size(); ++s) {
      traj.add_row({std::to_string(trial), std::to_string(s), tr.states[s].to_string()});
    }
    nlohmann::json j;
    j["trial"] = trial;
    j["success"] = o.success;
    j["tau"] = o.tau ? nlohmann::json(*o.tau) : nlohmann::json(nullptr);
    j["flips"] = o.flips_applied;
    j["noise_seed"] = o.seed;
    outcomes.push_back(j);
  }
  write_csv(dir / "trajectory.csv", traj);
  nlohmann::json summary;
  summary["trials"] = a.trials;
  summary["successes"] = successes;
  summary["max_steps"] = max_steps_text(a.max_steps);
  summary["outcomes"] = outcomes;
  write_text(dir / "outcome.json", summary.dump(2) + "\n");
  write_manifest(dir / "trajectory.manifest.json", "retrieve", c,
                 {{"checkpoint", a.checkpoint},
                  {"input", a.input},
                  {"flips", std::to_string(a.flips)},
                  {"trials", std::to_string(a.trials)},
                  {"max_steps", max_steps_text(a.max_steps)}});
  save_timestamp(dir / "run_timestamp.json");
  ctx.out << fmt::format("retrieval: {}/{} successful (k = {})\n", successes, a.trials, a.flips);
  if (a.trials == 1 && outcomes[0]["success"].get<bool>()) {
    ctx.out << fmt::format("tau = {}\n", outcomes[0]["tau"].get<std::size_t>());
  }
  return kOk;
}

struct ConstructArgs {
  std::string input;
  std::string checkpoint = "constructed.satn";
};

int cmd_construct(Context& ctx, Common& c, const ConstructArgs& a) {
  const PatternSequence seq = load_input(a.input, c.binarize_threshold);
  const HiddenNetwork net = construct_one_hot(seq);
  const fs::path dir = prepare_out(c);
  const fs::path ckpt = fs::path(a.checkpoint).is_absolute() ? fs::path(a.checkpoint) : dir / a.checkpoint;
  write_checkpoint_verified(net, ckpt);
  ctx.out << fmt::format("M = T - 1 = {}\ncheckpoint: {}\n", net.hidden_dim(), ckpt.string());
  return kOk;
}

struct SweepArgs {
  std::string axis = "T";
  std::vector<std::size_t> values;
  std::size_t visible = 100;
  std::size_t hidden = 500;
  std::size_t period = 70;
  std::size_t trials = 100;
  std::vector<std::string> methods{"V_only", "joint"};
  std::size_t flips = 10;
  std::optional<std::size_t> max_steps;
};

int cmd_sweep(Context& ctx, Common& c, const SweepArgs& a) {
  c.hp.validate();
  SweepConfig cfg;
  if (a.axis == "T") {
    cfg.axis = SweepAxis::Period;
  } else if (a.axis == "M") {
    cfg.axis = SweepAxis::Hidden;
  } else {
    throw PreconditionError(fmt::format("--axis must be T or M, got '{}'", a.axis));
  }
  if (a.values.empty()) throw PreconditionError("--values must list at least one grid value");
  if (a.flips > a.visible) throw PreconditionError(fmt::format("--flips {} exceeds N = {}", a.flips, a.visible));
  cfg.values = a.values;
  cfg.visible = a.visible;
  cfg.hidden = a.hidden;
  cfg.period = a.period;
  cfg.trials = a.trials;
  cfg.methods.clear();
  for (const auto& m : a.methods) cfg.methods.push_back(parse_method(m));
  cfg.flips = a.flips;
  cfg.max_steps = a.max_steps;
  cfg.hp = c.hp;
  cfg.master_seed = c.seed;
  cfg.jobs = c.jobs;
  const fs::path dir = prepare_out(c);
  const auto tables = capacity_sweep(cfg);

  CsvTable csv({"axis", "value", "method", "trials", "successes", "converged", "stored"});
  for (const auto& t : tables) {
    for (std::size_t i = 0; i < t.axis_values.size(); ++i) {
      csv.add_row({std::string(to_string(t.axis)), std::to_string(t.axis_values[i]), std::string(to_string(t.method)),
                   std::to_string(t.trials), std::to_string(t.success_counts[i]),
                   std::to_string(t.converged_counts[i]), std::to_string(t.stored_counts[i])});
    }
  }
  const std::string stem = fmt::format("sweep_{}", a.axis);
  write_csv(dir / (stem + ".csv"), csv);
  write_manifest(dir / (stem + ".manifest.json"), "sweep", c,
                 {{"axis", a.axis},
                  {"values", join(a.values)},
                  {"visible", std::to_string(a.visible)},
                  {"hidden", a.axis == "T" ? std::to_string(a.hidden) : "swept"},
                  {"period", a.axis == "M" ? std::to_string(a.period) : "swept"},
                  {"trials", std::to_string(a.trials)},
                  {"methods", join(a.methods)},
                  {"flips", std::to_string(a.flips)},
                  {"max_steps", max_steps_text(a.max_steps)}});
  save_timestamp(dir / "run_timestamp.json");

  for (const auto& t : tables) {
    ctx.out << fmt::format("{:>8} ", to_string(t.method));
    for (std::size_t i = 0; i < t.axis_values.size(); ++i) {
      ctx.out << fmt::format(" {}={}:{}", a.axis, t.axis_values[i], t.success_counts[i]);
    }
    ctx.out << "\n";
  }
  return kOk;
}

struct ReconstructArgs {
  std::size_t visible = 100;
  std::vector<std::size_t> m_values{100, 200, 500, 1000};
  std::size_t trials = 100;
  std::vector<std::string> distributions{"gaussian", "uniform"};
  std::vector<std::string> decoders{"pseudo_inverse", "transpose"};
};

int cmd_reconstruct(Context& ctx, Common& c, const ReconstructArgs& a) {
  if (a.m_values.empty()) throw PreconditionError("--m-values must be non-empty");
  const fs::path dir = prepare_out(c);
  CsvTable csv({"distribution", "decoder", "M", "trials", "mean_error"});
  for (const auto& d : a.distributions) {
    for (const auto& m : a.decoders) {
      const auto curve =
          reconstruction_experiment(a.visible, a.m_values, parse_distribution(d), parse_decoder(m), a.trials, c.seed);
      for (std::size_t i = 0; i < curve.m_values.size(); ++i) {
        csv.add_row({std::string(to_string(curve.distribution)), std::string(to_string(curve.method)),
                     std::to_string(curve.m_values[i]), std::to_string(a.trials), format_double(curve.mean_error[i])});
        ctx.out << fmt::format("{:>8} {:>14} M={:<5} error={:.4f}\n", d, m, curve.m_values[i], curve.mean_error[i]);
      }
    }
  }
  write_csv(dir / "reconstruction.csv", csv);
  write_manifest(dir / "reconstruction.manifest.json", "reconstruct", c,
                 {{"visible", std::to_string(a.visible)},
                  {"m_values", join(a.m_values)},
                  {"trials", std::to_string(a.trials)},
                  {"distributions", join(a.distributions)},
                  {"decoders", join(a.decoders)}});
  save_timestamp(dir / "run_timestamp.json");
  return kOk;
}

struct AblateArgs {
  std::vector<std::string> inputs;
  bool synthetic = false;
  std::vector<std::string> methods{"hebbian", "V_only", "joint"};
  std::vector<double> thetas{0.0};
  std::size_t hidden = 500;
  std::size_t flips = 10;
  std::size_t trials = 10;
  std::optional<std::size_t> max_steps;
};

int cmd_ablate(Context& ctx, Common& c, const AblateArgs& a) {
  c.hp.validate();
  std::vector<PatternSequence> seqs;
  if (a.synthetic) {
    const auto frames = moving_shapes_frames();
    seqs.push_back(binarize_frames(frames, c.binarize_threshold));
  }
  for (auto& s : load_inputs(a.inputs, c.binarize_threshold)) seqs.push_back(std::move(s));
  if (seqs.empty()) throw PreconditionError("ablate needs --input files or --synthetic");
  for (const auto& s : seqs) {
    if (s.dim() != seqs.front().dim()) throw ShapeError("input sequences differ in N");
  }
  if (a.flips > seqs.front().dim()) {
    throw PreconditionError(fmt::format("--flips {} exceeds N = {}", a.flips, seqs.front().dim()));
  }
  AblationConfig cfg;
  cfg.methods.clear();
  for (const auto& m : a.methods) cfg.methods.push_back(parse_method(m));
  cfg.thetas = a.thetas;
  cfg.hidden = a.hidden;
  cfg.flips = a.flips;
  cfg.trials = a.trials;
  cfg.max_steps = a.max_steps;
  cfg.hp = c.hp;
  cfg.seed = c.seed;
  cfg.jobs = c.jobs;
  const fs::path dir = prepare_out(c);
  const auto reports = ablation_grid(seqs, cfg);

  CsvTable csv({"method", "theta", "successes", "attempts", "converged", "stored", "hidden_activity"});
  CsvTable samples({"method", "theta", "step", "state"});
  for (const auto& r : reports) {
    csv.add_row({std::string(to_string(r.method)), format_double(r.theta), std::to_string(r.successes),
                 std::to_string(r.attempts), r.converged ? "1" : "0", r.stored ? "1" : "0",
                 format_double(r.hidden_activity)});
    for (std::size_t s = 0; s < r.sample.states.size(); ++s) {
      samples.add_row({std::string(to_string(r.method)), format_double(r.theta), std::to_string(s),
                       r.sample.states[s].to_string()});
    }
    ctx.out << fmt::format("{:>8} theta={:<6} {}/{} retrieved, activity {:.3f}\n", to_string(r.method), r.theta,
                           r.successes, r.attempts, r.hidden_activity);
  }
  write_csv(dir / "ablation.csv", csv);
  write_csv(dir / "ablation_samples.csv", samples);
  const std::map<std::string, std::string> settings{{"inputs", join(a.inputs)},
                                                    {"synthetic", a.synthetic ? "true" : "false"},
                                                    {"methods", join(a.methods)},
                                                    {"thetas", join(a.thetas)},
                                                    {"hidden", std::to_string(a.hidden)},
                                                    {"flips", std::to_string(a.flips)},
                                                    {"trials", std::to_string(a.trials)},
                                                    {"max_steps", max_steps_text(a.max_steps)}};
  write_manifest(dir / "ablation.manifest.json", "ablate", c, settings);
  write_manifest(dir / "ablation_samples.manifest.json", "ablate", c, settings);
  save_timestamp(dir / "run_timestamp.json");
  return kOk;
}

struct GenArgs {
  std::string kind = "random";
  std::size_t visible = 100;
  std::size_t period = 70;
  std::size_t width = 32;
  std::size_t height = 32;
  std::size_t frames = 20;
  std::string output;
};

int cmd_gen(Context& ctx, Common& c, const GenArgs& a) {
  const fs::path dir = prepare_out(c);
  const fs::path path = fs::path(a.output).is_absolute() ? fs::path(a.output) : dir / a.output;
  if (a.kind == "shapes") {
    const auto frames = moving_shapes_frames(a.width, a.height, a.frames);
    save_pgm_frames(frames, path);
    ctx.out << fmt::format("wrote {} frames of {}x{} to {}\n", frames.size(), a.width, a.height, path.string());
    return kOk;
  }
  PatternSequence seq = [&] {
    if (a.kind == "random") {
      Rng rng(derive_seed(c.seed, {static_cast<std::uint64_t>(SeedStream::Sequence), a.visible, a.period}));
      return gen_random_periodic_sequence(a.visible, a.period, rng);
    }
    if (a.kind == "xor") return xor_sequence();
    if (a.kind == "toy-a") return toy_sequence_a();
    if (a.kind == "toy-b") return toy_sequence_b();
    throw PreconditionError(fmt::format("unknown --kind '{}' (random, xor, toy-a, toy-b, shapes)", a.kind));
  }();
  save_sequence(seq, path);
  if (!(load_sequence(path).patterns() == seq.patterns())) {
    throw IoError(fmt::format("verification failed for {}", path.string()));
  }
  ctx.out << fmt::format("wrote N={} T={} sequence to {}\n", seq.dim(), seq.length(), path.string());
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Train and probe recurrent binary networks that replay pattern sequences"};
  app.name("seqattract");
  app.require_subcommand(1);

  Common common;
  TrainArgs train_args;
  RetrieveArgs retrieve_args;
  ConstructArgs construct_args;
  SweepArgs sweep_args;
  ReconstructArgs recon_args;
  AblateArgs ablate_args;
  GenArgs gen_args;

  auto* train = app.add_subcommand("train", "Train a network on sequence file(s)");
  add_common(train, common, true);
  train->add_option("--input", train_args.inputs, "Sequence file(s) (.seq or .pgm)")->required();
  train->add_option("--hidden", train_args.hidden, "Hidden units M")->capture_default_str();
  train->add_option("--method", train_args.method, "joint, V_only or hebbian")->capture_default_str();
  train->add_option("--checkpoint", train_args.checkpoint, "Checkpoint file name")->capture_default_str();
  train->add_flag("--stop-early", train_args.stop_early, "Stop after the first epoch without violations");

  auto* retrieve = app.add_subcommand("retrieve", "Run noisy retrieval from a checkpoint");
  add_common(retrieve, common, false);
  retrieve->add_option("--checkpoint", retrieve_args.checkpoint, "Checkpoint file")->required();
  retrieve->add_option("--input", retrieve_args.input, "Stored sequence")->required();
  retrieve->add_option("--flips", retrieve_args.flips, "Entries of x(1) to flip")->capture_default_str();
  retrieve->add_option("--trials", retrieve_args.trials, "Independent noisy starts")->capture_default_str();
  retrieve->add_option("--max-steps", retrieve_args.max_steps, "Free-run length (default 2T+10)");

  auto* construct = app.add_subcommand("construct", "Build the one-hot network for a sequence");
  add_common(construct, common, false);
  construct->add_option("--input", construct_args.input, "Sequence file")->required();
  construct->add_option("--checkpoint", construct_args.checkpoint, "Checkpoint file name")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Capacity sweep over T or M");
  add_common(sweep, common, true);
  sweep->add_option("--axis", sweep_args.axis, "T or M")->capture_default_str();
  sweep->add_option("--values", sweep_args.values, "Grid values")->required();
  sweep->add_option("--visible", sweep_args.visible, "Visible units N")->capture_default_str();
  sweep->add_option("--hidden", sweep_args.hidden, "Hidden units M (axis T)")->capture_default_str();
  sweep->add_option("--period", sweep_args.period, "Sequence length T (axis M)")->capture_default_str();
  sweep->add_option("--trials", sweep_args.trials, "Trials per cell")->capture_default_str();
  sweep->add_option("--methods", sweep_args.methods, "Methods")->capture_default_str();
  sweep->add_option("--flips", sweep_args.flips, "Retrieval noise k")->capture_default_str();
  sweep->add_option("--max-steps", sweep_args.max_steps, "Free-run length (default 2T+10)");

  auto* reconstruct = app.add_subcommand("reconstruct", "Random-projection reconstruction error");
  add_common(reconstruct, common, false);
  reconstruct->add_option("--visible", recon_args.visible, "N")->capture_default_str();
  reconstruct->add_option("--m-values", recon_args.m_values, "Hidden sizes")->capture_default_str();
  reconstruct->add_option("--trials", recon_args.trials, "Trials per M")->capture_default_str();
  reconstruct->add_option("--distributions", recon_args.distributions, "gaussian and/or uniform")
      ->capture_default_str();
  reconstruct->add_option("--decoders", recon_args.decoders, "pseudo_inverse and/or transpose")
      ->capture_default_str();

  auto* ablate = app.add_subcommand("ablate", "Compare hebbian, V_only and joint learning");
  add_common(ablate, common, true);
  ablate->add_option("--input", ablate_args.inputs, "Sequence file(s)");
  ablate->add_flag("--synthetic", ablate_args.synthetic, "Add the built-in moving-shapes sequence");
  ablate->add_option("--methods", ablate_args.methods, "Methods")->capture_default_str();
  ablate->add_option("--thetas", ablate_args.thetas, "Sparsity thresholds")->capture_default_str();
  ablate->add_option("--hidden", ablate_args.hidden, "Hidden units M")->capture_default_str();
  ablate->add_option("--flips", ablate_args.flips, "Retrieval noise k")->capture_default_str();
  ablate->add_option("--trials", ablate_args.trials, "Noisy retrievals per sequence")->capture_default_str();
  ablate->add_option("--max-steps", ablate_args.max_steps, "Free-run length (default 2T+10)");

  auto* gen = app.add_subcommand("gen", "Write a sequence or frame fixture");
  add_common(gen, common, false);
  gen->add_option("--kind", gen_args.kind, "random, xor, toy-a, toy-b or shapes")->capture_default_str();
  gen->add_option("--visible", gen_args.visible, "N (random)")->capture_default_str();
  gen->add_option("--period", gen_args.period, "T (random)")->capture_default_str();
  gen->add_option("--width", gen_args.width, "Frame width (shapes)")->capture_default_str();
  gen->add_option("--height", gen_args.height, "Frame height (shapes)")->capture_default_str();
  gen->add_option("--frames", gen_args.frames, "Frame count (shapes)")->capture_default_str();
  gen->add_option("--output", gen_args.output, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "seqattract: " << e.what() << "\n";
    return kConfigError;
  }

  Context ctx{out, err};
  try {
    resolve_seed(common);
    if (*train) return cmd_train(ctx, common, train_args);
    if (*retrieve) return cmd_retrieve(ctx, common, retrieve_args);
    if (*construct) return cmd_construct(ctx, common, construct_args);
    if (*sweep) return cmd_sweep(ctx, common, sweep_args);
    if (*reconstruct) return cmd_reconstruct(ctx, common, recon_args);
    if (*ablate) return cmd_ablate(ctx, common, ablate_args);
    if (*gen) return cmd_gen(ctx, common, gen_args);
  } catch (const PreconditionError& e) {
    err << "seqattract: invalid configuration: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    err << "seqattract: " << e.what() << "\n";
    return kConfigError;
  } catch (const FormatError& e) {
    err << "seqattract: malformed input: " << e.what() << "\n";
    return kConfigError;
  } catch (const ShapeError& e) {
    err << "seqattract: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "seqattract: error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace seqattract::cli
