#include "sfebound/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "sfebound/bound_engine.hpp"
#include "sfebound/campaigns.hpp"
#include "sfebound/curve.hpp"
#include "sfebound/dr_reduction.hpp"
#include "sfebound/task_io.hpp"
#include "sfebound/task_model.hpp"

namespace sfebound::cli {

namespace {

/// Signals a nonzero exit with a one-line diagnostic.
struct CliExit {
  int code;
  std::string message;
};

struct TaskSource {
  std::string family;
  std::int64_t alphabet = 2;
  std::int64_t n = 2;
  std::int64_t k = 1;
  std::string task_file;
  CLI::Option* family_opt = nullptr;
  CLI::Option* task_file_opt = nullptr;
  std::vector<CLI::Option*> param_opts;
};

void add_task_options(CLI::App* app, TaskSource& src) {
  src.family_opt = app->add_option("--family", src.family, "Task family: ot, knot, xot, eq, ip, mp")
                       ->check(CLI::IsMember({"ot", "knot", "xot", "eq", "ip", "mp"}));
  src.param_opts.push_back(app->add_option("--alphabet", src.alphabet, "|W| for the OT families"));
  src.param_opts.push_back(app->add_option("--n", src.n, "Family size parameter"));
  src.param_opts.push_back(app->add_option("--k", src.k, "Subset size for k-of-n OT"));
  src.task_file_opt = app->add_option("--task-file", src.task_file, "JSON task file");
}

bool has_task_source(const TaskSource& src) { return src.family_opt->count() > 0 || src.task_file_opt->count() > 0; }

SfeTask resolve_task(const TaskSource& src) {
  const bool fam = src.family_opt->count() > 0;
  const bool file = src.task_file_opt->count() > 0;
  if (fam == file) throw CliExit{kInvalidInput, "exactly one task source is required: --family or --task-file"};
  if (file) {
    for (const auto* opt : src.param_opts) {
      if (opt->count() > 0) throw CliExit{kInvalidInput, "family parameters cannot be combined with --task-file"};
    }
    auto task = load_task_file(src.task_file);
    const auto report = validate_task(task);
    if (!report.ok()) {
      throw CliExit{kInvalidInput, "invalid task '" + task.name + "': " + report.violations.front().message + " (" +
                                       std::to_string(report.violations.size()) + " violation(s))"};
    }
    return task;
  }
  return make_family({parse_family(src.family), src.alphabet, src.n, src.k});
}

std::string format_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4e", v);
  return buf;
}

void print_row(std::ostream& out, const std::string& key, const std::string& value) {
  out << std::left << std::setw(14) << key << value << '\n';
}

void write_json(std::ostream& out, const nlohmann::json& doc) { out << doc.dump(2) << '\n'; }

// ---------------------------------------------------------------- bound

int cmd_bound(const TaskSource& src, bool json, bool full, std::ostream& out) {
  const auto task = resolve_task(src);
  const auto r = bound_report(task);
  if (r.completely_insecure) {
    throw CliExit{kCompletelyInsecure, "completely insecure: b_rand = 1 for " + task.name + ", no cheating gap exists"};
  }
  if (json) {
    nlohmann::json doc = {{"task", r.task_name},
                          {"y_size", r.y_size},
                          {"a_rand", r.a_rand.str()},
                          {"a_rand_value", r.a_rand.to_double()},
                          {"b_rand", r.b_rand.str()},
                          {"b_rand_value", r.b_rand.to_double()},
                          {"c", r.c},
                          {"epsilon", r.epsilon},
                          {"alice_bound", r.alice_bound},
                          {"bob_bound", r.bob_bound},
                          {"alice_excess", r.alice_excess},
                          {"bob_excess", r.bob_excess}};
    if (r.fixed_point) {
      doc["residual"] = r.fixed_point->residual;
      doc["iterations"] = r.fixed_point->iterations;
      doc["warnings"] = r.fixed_point->warnings;
    }
    write_json(out, doc);
    return kOk;
  }
  auto fmt = [&](double v) { return full ? format_shortest(v) : format_rounded(v, 4); };
  print_row(out, "task", r.task_name);
  print_row(out, "|Y|", std::to_string(r.y_size));
  print_row(out, "a_rand", r.a_rand.str() + " (" + fmt(r.a_rand.to_double()) + ")");
  print_row(out, "b_rand", r.b_rand.str() + " (" + fmt(r.b_rand.to_double()) + ")");
  print_row(out, "c", fmt(r.c));
  print_row(out, "epsilon", full ? format_shortest(r.epsilon) : format_sci(r.epsilon));
  print_row(out, "alice_bound", fmt(r.alice_bound));
  print_row(out, "bob_bound", fmt(r.bob_bound));
  if (r.fixed_point) {
    for (const auto& w : r.fixed_point->warnings) print_row(out, "warning", w);
  }
  return kOk;
}

// ---------------------------------------------------------------- brand

int cmd_brand(const TaskSource& src, bool json, std::ostream& out) {
  const auto task = resolve_task(src);
  std::optional<Rational> brute;
  std::optional<Rational> closed;
  if (task.materialized()) brute = b_rand_bruteforce(task);
  if (task.family) closed = b_rand_closed_form(task);
  const bool agree = !(brute && closed) || *brute == *closed;
  const Rational value = brute ? *brute : *closed;

  if (json) {
    nlohmann::json doc = {{"task", task.name},
                          {"x_size", task.x_size},
                          {"y_size", task.y_size},
                          {"b_size", task.b_size},
                          {"a_rand", a_rand(task).str()},
                          {"b_rand", value.str()},
                          {"b_rand_value", value.to_double()},
                          {"bruteforce", brute ? nlohmann::json(brute->str()) : nlohmann::json(nullptr)},
                          {"closed_form", closed ? nlohmann::json(closed->str()) : nlohmann::json(nullptr)},
                          {"agree", agree}};
    write_json(out, doc);
  } else {
    print_row(out, "task", task.name);
    print_row(out, "|X| |Y| |B|",
              std::to_string(task.x_size) + " " + std::to_string(task.y_size) + " " + std::to_string(task.b_size));
    print_row(out, "a_rand", a_rand(task).str());
    print_row(out, "bruteforce", brute ? brute->str() : "n/a (table not materialized)");
    print_row(out, "closed_form", closed ? closed->str() : "n/a (explicit table)");
    print_row(out, "b_rand", value.str() + " (" + format_shortest(value.to_double()) + ")");
  }
  if (!agree) {
    throw CliExit{kInvariantViolation,
                  "brute force " + brute->str() + " disagrees with closed form " + closed->str() + " for " + task.name};
  }
  return kOk;
}

// ---------------------------------------------------------------- curve

struct CurveArgs {
  double c_min = 1.0;
  double c_max = 0.0;
  std::size_t samples = 200;
  bool clip = false;
  std::string out_path;
  std::string figure;
  std::string out_dir;
  CLI::Option* c_max_opt = nullptr;
  CLI::Option* out_dir_opt = nullptr;
};

std::string curve_for(const Rational& b, std::int64_t y, const CurveArgs& a, bool use_c_max) {
  if (!(b < Rational(1))) throw CliExit{kCompletelyInsecure, "completely insecure: b_rand = 1, there is no trade-off curve"};
  const double hi = use_c_max ? a.c_max : unit_crossing(b, y);
  return curve_csv(emit_curve(b, y, a.c_min, hi, a.samples, a.clip));
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CliExit{kInvalidInput, "cannot write " + path.string()};
  f << text;
  if (!f) throw CliExit{kInvalidInput, "failed writing " + path.string()};
}

std::string file_safe(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char ch) { return !std::isalnum(static_cast<unsigned char>(ch)) && ch != '-'; }, '_');
  s.erase(std::remove(s.begin(), s.end(), '_'), s.end());
  return s;
}

int cmd_curve(const TaskSource& src, const CurveArgs& a, std::ostream& out) {
  const bool use_c_max = a.c_max_opt->count() > 0;
  if (!a.figure.empty()) {
    if (has_task_source(src)) throw CliExit{kInvalidInput, "--figure cannot be combined with a task source"};
    const auto traces = figure_traces();
    std::vector<FigureTrace> chosen;
    std::copy_if(traces.begin(), traces.end(), std::back_inserter(chosen),
                 [&](const FigureTrace& t) { return a.figure == "all" || t.figure == a.figure; });
    if (chosen.empty()) {
      std::string known;
      for (const auto& t : traces) {
        if (known.find(t.figure) == std::string::npos) known += (known.empty() ? "" : ", ") + t.figure;
      }
      throw CliExit{kInvalidInput, "unknown figure '" + a.figure + "' (known: " + known + ", all)"};
    }
    std::filesystem::path dir = ".";
    if (a.out_dir_opt->count() > 0) {
      dir = a.out_dir;
    } else if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
      dir = env;
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw CliExit{kInvalidInput, "cannot create output directory " + dir.string() + ": " + ec.message()};
    for (const auto& t : chosen) {
      const auto task = make_family(t.params);
      const auto b = b_rand(task);
      const auto path = dir / (t.figure + "_" + file_safe(t.label) + ".csv");
      write_file(path, curve_for(b, task.y_size, a, use_c_max));
      out << path.string() << '\n';
    }
    return kOk;
  }

  const auto task = resolve_task(src);
  const std::string csv = curve_for(b_rand(task), task.y_size, a, use_c_max);
  if (a.out_path.empty()) {
    out << csv;
  } else {
    write_file(a.out_path, csv);
  }
  return kOk;
}

// ---------------------------------------------------------------- verify-lemmas

struct VerifyArgs {
  lab::CampaignOptions opts;
  std::string lemma = "all";
  std::string out_path;
};

int cmd_verify(const VerifyArgs& a, bool json, std::ostream& out) {
  std::vector<lab::CampaignSummary> runs;
  if (a.lemma == "all" || a.lemma == "gentle") runs.push_back(lab::run_gentle_campaign(a.opts));
  if (a.lemma == "all" || a.lemma == "sequential") runs.push_back(lab::run_sequential_campaign(a.opts));
  if (a.lemma == "all" || a.lemma == "learning") runs.push_back(lab::run_learning_campaign(a.opts));

  if (!a.out_path.empty()) {
    std::string lines;
    for (const auto& run : runs) {
      for (const auto& rec : run.records) lines += lab::to_json(rec).dump() + '\n';
    }
    write_file(a.out_path, lines);
  }

  std::size_t instances = 0;
  std::size_t violations = 0;
  const lab::CampaignRecord* first_failure = nullptr;
  for (const auto& run : runs) {
    instances += run.records.size();
    violations += run.violations;
    for (const auto& rec : run.records) {
      if (!rec.holds && first_failure == nullptr) first_failure = &rec;
    }
  }

  if (json) {
    nlohmann::json doc = {{"seed", a.opts.seed}, {"instances", instances}, {"violations", violations}};
    doc["campaigns"] = nlohmann::json::array();
    for (const auto& run : runs) {
      doc["campaigns"].push_back({{"lemma", run.lemma}, {"instances", run.records.size()}, {"violations", run.violations}});
    }
    write_json(out, doc);
  } else {
    for (const auto& run : runs) {
      out << run.lemma << ": " << run.records.size() << " instances, " << run.violations << " violations\n";
    }
    out << "total: " << instances << " instances, " << violations << " violations\n";
  }
  if (first_failure != nullptr) {
    throw CliExit{kInvariantViolation, first_failure->lemma + " violated (seed " + std::to_string(first_failure->seed) +
                                           "): " + first_failure->failure};
  }
  return kOk;
}

// ---------------------------------------------------------------- simulate-dr

struct SimArgs {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string strategy = "honest";
  std::string leak = "none";
  std::vector<std::int64_t> known;
};

int cmd_simulate(const TaskSource& src, const SimArgs& a, bool json, std::ostream& out) {
  const auto task = resolve_task(src);
  if (!task.materialized()) throw CliExit{kInvalidInput, "task " + task.name + " is too large to materialize"};
  if (task.y_size < 2) throw CliExit{kInvalidInput, "die rolling needs |Y| >= 2"};
  const auto ny = static_cast<double>(task.y_size);

  dr::DrStats stats;
  std::optional<double> expected;  // forcing rate predicted by the reduction
  if (a.strategy == "honest") {
    stats = dr::run_honest(task, a.trials, a.seed, a.threads);
  } else if (a.strategy == "blind-alice") {
    stats = dr::run_cheating_alice(task, dr::blind_alice(), a.trials, a.seed, a.threads);
    expected = 1.0 / ny;
  } else if (a.strategy == "oracle-alice") {
    stats = dr::run_cheating_alice(task, dr::oracle_alice(), a.trials, a.seed, a.threads);
    expected = 1.0;
  } else if (a.strategy == "posterior-alice") {
    const auto leak = a.leak == "output" ? dr::AliceLeak::kOutput : a.leak == "input" ? dr::AliceLeak::kInput : dr::AliceLeak::kNone;
    stats = dr::run_cheating_alice(task, dr::posterior_alice(leak), a.trials, a.seed, a.threads);
    if (leak == dr::AliceLeak::kNone) expected = 1.0 / ny;
    if (leak == dr::AliceLeak::kInput) expected = 1.0;
  } else if (a.strategy == "full-bob") {
    stats = dr::run_cheating_bob(task, dr::full_knowledge_bob(), a.trials, a.seed, a.threads);
    expected = 1.0;
  } else if (a.strategy == "honest-entry-bob") {
    stats = dr::run_cheating_bob(task, dr::honest_entry_bob(), a.trials, a.seed, a.threads);
    expected = 1.0 / ny;
  } else {  // set-bob
    if (a.known.empty()) throw CliExit{kInvalidInput, "set-bob needs --known"};
    for (auto y : a.known) {
      if (y < 0 || y >= task.y_size) throw CliExit{kInvalidInput, "--known entry " + std::to_string(y) + " is outside Y"};
    }
    auto bob = dr::fixed_set_bob(a.known);
    std::vector<std::int64_t> distinct = a.known;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    stats = dr::run_cheating_bob(task, bob, a.trials, a.seed, a.threads);
    expected = static_cast<double>(distinct.size()) / ny;
  }
  const auto kitaev = dr::kitaev_bound(task.y_size);

  if (json) {
    auto doc = dr::to_json(stats);
    doc["task"] = task.name;
    doc["strategy"] = a.strategy;
    if (a.strategy == "posterior-alice") doc["leak"] = a.leak;
    doc["expected_forcing_rate"] = expected ? nlohmann::json(*expected) : nlohmann::json(nullptr);
    doc["kitaev_product"] = kitaev.product;
    doc["kitaev_max"] = kitaev.max;
    write_json(out, doc);
  } else {
    print_row(out, "task", task.name);
    print_row(out, "strategy", a.strategy + (a.strategy == "posterior-alice" ? " (leak " + a.leak + ")" : ""));
    print_row(out, "trials", std::to_string(stats.trials));
    print_row(out, "seed", std::to_string(stats.seed));
    print_row(out, "aborts", std::to_string(stats.abort_count));
    print_row(out, "disagreements", std::to_string(stats.disagreements));
    std::string hist;
    for (auto h : stats.histogram) hist += (hist.empty() ? "" : " ") + std::to_string(h);
    print_row(out, "histogram", hist);
    print_row(out, "tv_distance", format_rounded(stats.tv_distance, 4));
    print_row(out, "forcing_rate", format_rounded(stats.forcing_rate, 4));
    print_row(out, "expected", expected ? format_rounded(*expected, 4) : "n/a");
    print_row(out, "kitaev", "A*B >= " + format_rounded(kitaev.product, 4) + ", max(A,B) >= " + format_rounded(kitaev.max, 4));
  }
  if (a.strategy == "honest" && (stats.abort_count > 0 || stats.disagreements > 0)) {
    throw CliExit{kInvariantViolation, "honest run had " + std::to_string(stats.abort_count) + " aborts and " +
                                           std::to_string(stats.disagreements) + " disagreements"};
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cheating-probability bounds for two-party secure function evaluation", "sfebound"};
  app.require_subcommand(1);

  bool json = false;
  bool full = false;

  TaskSource bound_src;
  auto* bound = app.add_subcommand("bound", "Fixed-point constant and cheating bounds for a task");
  add_task_options(bound, bound_src);
  bound->add_flag("--json", json, "Machine-readable output at full precision");
  bound->add_flag("--full-precision", full, "Print shortest round-trip decimals instead of 4 places");

  TaskSource brand_src;
  auto* brand = app.add_subcommand("brand", "Black-box baseline b_rand by brute force and closed form");
  add_task_options(brand, brand_src);
  brand->add_flag("--json", json, "Machine-readable output");

  TaskSource curve_src;
  CurveArgs curve_args;
  auto* curve = app.add_subcommand("curve", "Trade-off curve c_B(c_A) as CSV");
  add_task_options(curve, curve_src);
  curve->add_option("--c-min", curve_args.c_min, "First c_A sample")->capture_default_str();
  curve_args.c_max_opt = curve->add_option("--c-max", curve_args.c_max, "Last c_A sample (default: where c_B reaches 1)");
  curve->add_option("--samples", curve_args.samples, "Number of samples")->capture_default_str()->check(CLI::Range(2, 10'000'000));
  curve->add_flag("--clip", curve_args.clip, "Drop samples with c_B < 1");
  curve->add_option("--out", curve_args.out_path, "Write the CSV here instead of standard output");
  curve->add_option("--figure", curve_args.figure, "Emit every trace of a figure (or 'all') as separate CSVs");
  curve_args.out_dir_opt =
      curve->add_option("--out-dir", curve_args.out_dir, std::string("Directory for --figure output (default: $") + kOutDirEnv + " or .)");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify-lemmas", "Randomized campaigns over the measurement inequalities");
  verify->add_option("--instances", verify_args.opts.instances, "Instances per campaign")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--min-dim", verify_args.opts.min_dim, "Smallest Hilbert space dimension")->capture_default_str()->check(CLI::Range(1, 64));
  verify->add_option("--max-dim", verify_args.opts.max_dim, "Largest Hilbert space dimension")->capture_default_str()->check(CLI::Range(1, 64));
  verify->add_option("--max-n", verify_args.opts.max_n, "Largest number of measurements")->capture_default_str()->check(CLI::Range(2, 16));
  verify->add_option("--seed", verify_args.opts.seed, "Master seed")->capture_default_str();
  verify->add_option("--threads", verify_args.opts.threads, "Worker threads (0: hardware concurrency)")->capture_default_str();
  verify->add_option("--lemma", verify_args.lemma, "Which campaign to run")
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "gentle", "sequential", "learning"}));
  verify->add_option("--out", verify_args.out_path, "Write one JSON record per instance here");
  verify->add_flag("--json", json, "Machine-readable summary");

  TaskSource sim_src;
  SimArgs sim_args;
  auto* sim = app.add_subcommand("simulate-dr", "Monte Carlo run of die rolling built from the task");
  add_task_options(sim, sim_src);
  sim->add_option("--trials", sim_args.trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_args.seed, "Master seed")->capture_default_str();
  sim->add_option("--threads", sim_args.threads, "Worker threads (0: hardware concurrency)")->capture_default_str();
  sim->add_option("--strategy", sim_args.strategy, "Who cheats and how")
      ->capture_default_str()
      ->check(CLI::IsMember({"honest", "blind-alice", "oracle-alice", "posterior-alice", "full-bob", "honest-entry-bob", "set-bob"}));
  sim->add_option("--leak", sim_args.leak, "What the SFE step leaks to posterior-alice")
      ->capture_default_str()
      ->check(CLI::IsMember({"none", "output", "input"}));
  sim->add_option("--known", sim_args.known, "Answer-vector entries set-bob knows (y indices)")->delimiter(',');
  sim->add_flag("--json", json, "Machine-readable output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }

  try {
    if (bound->parsed()) return cmd_bound(bound_src, json, full, out);
    if (brand->parsed()) return cmd_brand(brand_src, json, out);
    if (curve->parsed()) return cmd_curve(curve_src, curve_args, out);
    if (verify->parsed()) {
      if (verify_args.opts.min_dim > verify_args.opts.max_dim) throw CliExit{kInvalidInput, "--min-dim exceeds --max-dim"};
      return cmd_verify(verify_args, json, out);
    }
    return cmd_simulate(sim_src, sim_args, json, out);
  } catch (const CliExit& e) {
    err << "error: " << e.message << '\n';
    return e.code;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

}  // namespace sfebound::cli
