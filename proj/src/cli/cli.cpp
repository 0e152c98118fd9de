#include "gr1kit/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gr1kit/check.hpp"
#include "gr1kit/gr1.hpp"
#include "gr1kit/sim.hpp"
#include "gr1kit/workdelivery.hpp"

namespace gr1kit::cli {

namespace {

// Raised for unreadable inputs and bad option combinations (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw UsageError("cannot write " + path);
}

sim::PolicyKind policy_of(const std::string& name) {
  if (name == "random") return sim::PolicyKind::uniform_random;
  if (name == "min-bl") return sim::PolicyKind::greedy_min_bl;
  if (name == "max-bl") return sim::PolicyKind::greedy_max_bl;
  if (name == "scripted") return sim::PolicyKind::scripted;
  if (name == "interactive") return sim::PolicyKind::interactive;
  if (name == "all") return sim::PolicyKind::all_moves;
  throw UsageError("unknown adversary '" + name + "'");
}

struct AdversaryArgs {
  std::string kind = "random";
  std::string fallback = "random";
  std::uint64_t seed = 42;
  std::string events_path;
};

sim::Adversary make_adversary(const AdversaryArgs& a, const std::vector<sim::Event>& events, std::istream& in, std::ostream& out) {
  switch (policy_of(a.kind)) {
    case sim::PolicyKind::uniform_random: return sim::Adversary::uniform_random(a.seed);
    case sim::PolicyKind::greedy_min_bl: return sim::Adversary::greedy_min_bl();
    case sim::PolicyKind::greedy_max_bl: return sim::Adversary::greedy_max_bl();
    case sim::PolicyKind::interactive: return sim::Adversary::interactive(in, out);
    case sim::PolicyKind::all_moves: return sim::Adversary::all_moves();
    case sim::PolicyKind::scripted: {
      const auto fb = policy_of(a.fallback);
      if (fb != sim::PolicyKind::uniform_random && fb != sim::PolicyKind::greedy_min_bl && fb != sim::PolicyKind::greedy_max_bl)
        throw UsageError("fallback must be random, min-bl or max-bl");
      return sim::Adversary::scripted(events, a.seed, fb);
    }
  }
  throw UsageError("unknown adversary");
}

struct Synthesized {
  speclang::SpecDocument doc;
  arena::GameArena arena;
  gr1::SynthesisResult result;
};

Synthesized synthesize(const std::string& spec_path, std::uint64_t max_states) {
  Synthesized s;
  s.doc = speclang::parse_spec(read_file(spec_path));
  s.arena = arena::build_arena(s.doc, {max_states});
  s.result = gr1::solve(s.arena, s.doc);
  return s;
}

int cmd_emit(const std::string& config, const std::vector<std::string>& params, const std::string& output, std::ostream& out) {
  workdelivery::Params p;
  if (!config.empty()) p = workdelivery::parse_config(read_file(config), p);
  for (const auto& kv : params) workdelivery::apply_param(p, kv);
  write_output(output, workdelivery::emit_spec_text(p), out);
  return kOk;
}

int cmd_synth(const std::string& spec, const std::string& output, std::uint64_t max_states, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  Synthesized s = synthesize(spec, max_states);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  out << "states: " << s.arena.state_count() << "\n"
      << "winning: " << s.result.winning.count() << "\n"
      << "time_ms: " << ms << "\n";
  if (!s.result.realizable) {
    out << "result: unrealizable\n";
    return kUnrealizable;
  }
  const gr1::Strategy st = gr1::extract_strategy(s.result, s.arena);
  out << "result: realizable\n"
      << "strategy nodes: " << st.nodes.size() << "\n";
  if (!output.empty()) write_output(output, gr1::strategy_to_json(st), out);
  return kOk;
}

struct SimArgs {
  std::string strategy;
  std::string spec;
  AdversaryArgs adversary;
  int steps = 180;
  double td = 10.0;
  bool pace = false;
  std::string output;
};

int cmd_simulate(const SimArgs& a, std::istream& in, std::ostream& out) {
  const gr1::Strategy st = gr1::strategy_from_json(read_file(a.strategy));
  std::optional<arena::GameArena> ar;
  if (!a.spec.empty()) ar = arena::build_arena(speclang::parse_spec(read_file(a.spec)));
  std::vector<sim::Event> events;
  if (!a.adversary.events_path.empty()) events = sim::parse_events(read_file(a.adversary.events_path));
  sim::Adversary adv = make_adversary(a.adversary, events, in, out);
  if (adv.kind() == sim::PolicyKind::all_moves) throw UsageError("adversary 'all' is only available to check");
  sim::RunOptions opts;
  opts.max_steps = a.steps;
  opts.td = a.td;
  opts.pace = a.pace;
  opts.events = events;
  opts.arena = ar ? &*ar : nullptr;
  const sim::Trace t = sim::run(st, adv, opts);
  write_output(a.output, sim::trace_to_csv(t), out);
  return kOk;
}

struct CheckArgs {
  std::string spec;
  std::string trace;
  std::string strategy;
  std::uint64_t window = 0;
  AdversaryArgs adversary{"all", "min-bl", 42, ""};
  std::string json;
};

int cmd_check(const CheckArgs& a, std::ostream& out) {
  if (a.trace.empty() && a.strategy.empty()) throw UsageError("check needs --trace or --strategy");
  const speclang::SpecDocument doc = speclang::parse_spec(read_file(a.spec));
  check::Verdict total;
  auto merge = [&](const std::string& title, const check::Verdict& v) {
    out << "[" << title << "] " << check::render_text(v);
    for (const auto& x : v.violations) total.add(x.where, x.clause, x.description);
    if (v.product_size) {
      total.product_size = v.product_size;
      total.window = v.window;
    }
  };
  std::uint64_t window = a.window;
  if (!a.strategy.empty()) {
    const gr1::Strategy st = gr1::strategy_from_json(read_file(a.strategy));
    const arena::GameArena ar = arena::build_arena(doc);
    const gr1::SynthesisResult r = gr1::solve(ar, doc);
    merge("closure", check::verify_strategy_closure(st, ar, &r));
    std::vector<sim::Event> events;
    if (!a.adversary.events_path.empty()) events = sim::parse_events(read_file(a.adversary.events_path));
    std::istringstream no_input;
    const auto lasso = check::lasso_check(st, make_adversary(a.adversary, events, no_input, out), doc);
    merge("lasso", lasso);
    if (window == 0 && lasso.window) window = *lasso.window;
  }
  if (!a.trace.empty()) {
    const arena::VarSpace space(doc.vars);
    const sim::Trace t = sim::trace_from_csv(read_file(a.trace), space);
    merge("safety", check::check_safety(t, doc));
    if (window > 0) {
      for (std::size_t j = 0; j < doc.sys_liveness.size(); ++j)
        merge("recurrence " + std::to_string(j) + " W=" + std::to_string(window),
              check::check_recurrence(t, doc.sys_liveness[j], doc, window));
    }
  }
  out << "verdict: " << (total.passed ? "PASS" : "FAIL") << "\n";
  if (!a.json.empty()) write_output(a.json, check::render_json(total) + "\n", out);
  return total.passed ? kOk : kCheckFailed;
}

int cmd_oracle(const std::string& spec, int random, std::uint64_t seed, std::ostream& out) {
  if (spec.empty() == (random <= 0)) throw UsageError("oracle needs exactly one of --spec or --random");
  if (!spec.empty()) {
    Synthesized s = synthesize(spec, std::uint64_t{1} << 24);
    std::vector<arena::StateSet> env, sys;
    for (const auto& e : s.doc.env_liveness) env.push_back(arena::state_predicate(s.arena.space(), e));
    for (const auto& e : s.doc.sys_liveness) sys.push_back(arena::state_predicate(s.arena.space(), e));
    const auto oracle = gr1::brute_force_oracle(s.arena, env, sys);
    const bool equal = oracle == s.result.winning;
    out << "states: " << s.arena.state_count() << "\nwinning: " << s.result.winning.count() << "\noracle: " << oracle.count()
        << "\n" << (equal ? "equal" : "MISMATCH") << "\n";
    return equal ? kOk : kCheckFailed;
  }
  int mismatches = 0;
  for (int k = 0; k < random; ++k) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    const auto inst = gr1::random_arena(s);
    const auto r = gr1::solve(inst.arena, inst.env_live, inst.sys_live);
    const auto oracle = gr1::brute_force_oracle(inst.arena, inst.env_live, inst.sys_live);
    if (oracle != r.winning) {
      ++mismatches;
      out << "seed " << s << ": MISMATCH\n";
    }
  }
  out << random - mismatches << "/" << random << " equal\n";
  return mismatches == 0 ? kOk : kCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"GR(1) synthesis, simulation and checking toolkit", "gr1kit"};
  app.require_subcommand(1);

  std::string config, output;
  std::vector<std::string> params;
  auto* emit = app.add_subcommand("emit", "Write the work-delivery spec");
  emit->add_option("--config", config, "key=value parameter file");
  emit->add_option("--param", params, "Parameter override key=value (repeatable, wins over --config)");
  emit->add_option("-o,--output", output, "Output path (default stdout)");

  std::string spec;
  std::uint64_t max_states = std::uint64_t{1} << 24;
  auto* synth = app.add_subcommand("synth", "Solve a spec and extract a strategy");
  synth->add_option("spec", spec, "Spec file")->required();
  synth->add_option("-o,--output", output, "Strategy JSON path");
  synth->add_option("--max-states", max_states, "Arena capacity");

  SimArgs sim_args;
  auto add_adversary = [](CLI::App* cmd, AdversaryArgs& a) {
    cmd->add_option("--adversary", a.kind, "random|min-bl|max-bl|scripted|interactive");
    cmd->add_option("--fallback", a.fallback, "Scripted fallback: random|min-bl|max-bl");
    cmd->add_option("--seed", a.seed, "Random seed");
    cmd->add_option("--events", a.events_path, "Scripted events file");
  };
  auto* simulate = app.add_subcommand("simulate", "Run a strategy against an adversary");
  simulate->add_option("--strategy", sim_args.strategy, "Strategy JSON")->required();
  simulate->add_option("--spec", sim_args.spec, "Spec file (enables hole detection)");
  add_adversary(simulate, sim_args.adversary);
  simulate->add_option("--steps", sim_args.steps, "Transitions to simulate")->check(CLI::PositiveNumber);
  simulate->add_option("--td", sim_args.td, "Seconds per step")->check(CLI::PositiveNumber);
  simulate->add_flag("--pace", sim_args.pace, "Sleep td seconds per step");
  simulate->add_option("-o,--output", sim_args.output, "Trace CSV path (default stdout)");

  SimArgs explore_args;
  explore_args.adversary.kind = "interactive";
  auto* explore = app.add_subcommand("explore", "Step through a strategy, choosing env moves by hand");
  explore->add_option("--strategy", explore_args.strategy, "Strategy JSON")->required();
  explore->add_option("--spec", explore_args.spec, "Spec file");
  explore->add_option("--steps", explore_args.steps, "Maximum steps")->check(CLI::PositiveNumber);
  explore->add_option("-o,--output", explore_args.output, "Trace CSV path");

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check", "Verify a trace or a strategy");
  check_cmd->add_option("--spec", check_args.spec, "Spec file")->required();
  check_cmd->add_option("--trace", check_args.trace, "Trace CSV");
  check_cmd->add_option("--strategy", check_args.strategy, "Strategy JSON");
  check_cmd->add_option("--window", check_args.window, "Recurrence window (default: from the lasso check)");
  add_adversary(check_cmd, check_args.adversary);
  check_cmd->add_option("--json", check_args.json, "Machine-readable verdict path");

  std::string oracle_spec;
  int random = 0;
  std::uint64_t oracle_seed = 1;
  auto* oracle = app.add_subcommand("oracle", "Cross-check the solver with the brute-force oracle");
  oracle->add_option("--spec", oracle_spec, "Spec file");
  oracle->add_option("--random", random, "Number of random arenas");
  oracle->add_option("--seed", oracle_seed, "First seed");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*emit) return cmd_emit(config, params, output, out);
    if (*synth) return cmd_synth(spec, output, max_states, out);
    if (*simulate) return cmd_simulate(sim_args, in, out);
    if (*explore) return cmd_simulate(explore_args, in, out);
    if (*check_cmd) return cmd_check(check_args, out);
    if (*oracle) return cmd_oracle(oracle_spec, random, oracle_seed, out);
  } catch (const speclang::SpecError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const workdelivery::InvalidParams& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kUsage;
  } catch (const sim::EventsError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sim::StrategyHole& e) {
    err << "strategy hole: " << e.what() << "\n";
    return kStrategyHole;
  } catch (const arena::CapacityExceeded& e) {
    err << "capacity exceeded: " << e.what() << "\n";
    return kCapacity;
  } catch (const gr1::TooLarge& e) {
    err << "too large: " << e.what() << "\n";
    return kCapacity;
  } catch (const check::AdversaryNotFinite& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace gr1kit::cli
