#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssrta/exact.hpp"
#include "ssrta/gap.hpp"
#include "ssrta/hardness.hpp"
#include "ssrta/io.hpp"
#include "ssrta/milp.hpp"
#include "ssrta/rta.hpp"
#include "ssrta/sim.hpp"

using nlohmann::json;
using namespace ssrta;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kFalsified = 2;

struct Globals {
  std::string output = "text";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool json() const { return output == "json"; }
};

// A failed cross-check; reported with exit status 2.
struct Falsification : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const Globals& g, const json& j, const std::string& text) {
  if (g.json()) {
    json out = j;
    out["schema"] = 1;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

std::string opt_str(const std::optional<Time>& t) { return t ? t->str() : "n/a"; }
json opt_json(const std::optional<Time>& t) { return t ? json(t->str()) : json(nullptr); }

std::vector<std::int64_t> parse_values(const std::string& csv) {
  std::vector<std::int64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad value '" + item + "' in --values");
    out.push_back(v);
  }
  return out;
}

json exact_json(const TaskSystem& ts, const ExactResult& r) {
  json j = {{"status", to_string(r.status)},
            {"wcrt", r.wcrt.str()},
            {"deadline", ts.ss_task().deadline.str()},
            {"period", ts.ss_task().period.str()},
            {"meets_deadline", r.status == ExactStatus::Exact && r.wcrt <= ts.ss_task().deadline},
            {"explored", r.explored},
            {"states", r.states},
            {"method", r.method}};
  j["witness"] = r.witness ? to_json(*r.witness) : json(nullptr);
  return j;
}

std::string exact_text(const TaskSystem& ts, const ExactResult& r) {
  std::ostringstream os;
  os << "status    " << to_string(r.status) << "\n"
     << "wcrt      " << r.wcrt << (r.status == ExactStatus::Exact ? "" : " (lower bound)") << "\n"
     << "deadline  " << ts.ss_task().deadline << "\n"
     << "verdict   " << (r.status == ExactStatus::Exact && r.wcrt <= ts.ss_task().deadline ? "meets deadline" : r.status == ExactStatus::CapExceeded ? "inconclusive" : "misses deadline") << "\n"
     << "explored  " << r.explored << " window configurations, " << r.states << " states\n"
     << "method    " << r.method << "\n";
  if (r.witness) os << "witness   " << to_json(*r.witness).dump() << "\n";
  return os.str();
}

json rta_json(const TaskSystem& ts, std::string& text) {
  std::ostringstream os;
  json tasks = json::array();
  os << "task  C  T  D  wcrt  verdict\n";
  for (const auto& t : ts.hp_tasks()) {
    auto r = wcrt_ordinary(ts, t.id);
    std::string verdict = r.status == OrdinaryStatus::Schedulable ? "schedulable" : r.status == OrdinaryStatus::DeadlineMiss ? "deadline-miss" : "unbounded";
    tasks.push_back({{"id", t.id}, {"wcrt", opt_json(r.wcrt)}, {"verdict", verdict}, {"jobs_examined", r.jobs_examined}, {"note", r.note}});
    os << t.id << "  " << t.wcet << "  " << t.period << "  " << t.deadline << "  " << opt_str(r.wcrt) << "  " << verdict << "\n";
  }
  json segs = json::array();
  auto spec = InterferenceSpec::all_periodic(ts);
  for (std::size_t j = 0; j < ts.segment_count(); ++j) {
    auto r = segment_response(ts, j, spec);
    segs.push_back(r.converged ? json(r.value.str()) : json(nullptr));
    os << "segment " << j + 1 << " response (all hp periodic): " << (r.converged ? r.value.str() : "diverges: " + r.reason) << "\n";
  }
  text = os.str();
  return {{"hp_tasks", tasks}, {"segment_bounds", segs}};
}

TaskSystem load(const std::string& path) { return load_task_system(path); }

PartitionInstance instance_from(std::int64_t M, std::int64_t V, const std::string& values, const std::string& plant,
                                std::mt19937_64& rng) {
  if (!values.empty()) {
    PartitionInstance p{M, V, parse_values(values)};
    return p;
  }
  if (plant == "yes") return plant_yes(M, V, rng);
  if (plant == "no") {
    auto p = plant_no(M, V, rng);
    if (!p) throw std::invalid_argument("no NO instance could be planted for M=" + std::to_string(M) + ", V=" + std::to_string(V));
    return *p;
  }
  throw std::invalid_argument("either --values or --plant yes|no is required");
}

json report_json(const BoundsReport& r) {
  json segs = json::array();
  for (const auto& s : r.ub_seg) segs.push_back(s.str());
  return {{"q", r.params.q},
          {"m", r.params.m},
          {"eps", r.params.eps.str()},
          {"ub_seg", segs},
          {"ub_split", r.ub_split.str()},
          {"ub_joint", r.ub_joint.str()},
          {"exact", r.exact.str()},
          {"milp_lb", r.milp_lb.str()},
          {"ratio", r.ratio.str()},
          {"threshold", r.threshold.str()},
          {"threshold_applies", r.threshold_applies},
          {"meets_threshold", r.meets_threshold},
          {"full_model_feasible", r.full_model_feasible ? json(*r.full_model_feasible) : json("n/a")},
          {"exact_by_search", opt_json(r.exact_by_search)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Worst-case response time analysis of a segmented self-suspending lowest-priority task"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--output", g.output, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", g.seed, "Seed for every randomized choice");
  app.add_option("--threads", g.threads, "Worker threads for the exact search")->check(CLI::Range(1u, 256u));

  std::string file;
  std::function<int()> action;

  auto* analyze = app.add_subcommand("analyze", "Utilization, hp RTA, split/joint bounds, exact search and the full MILP bound");
  analyze->add_option("file", file, "Task-set file (JSON or .toml)")->required();
  std::uint64_t analyze_cap = 2'000'000;
  analyze->add_option("--cap", analyze_cap, "Exact-search cap");
  analyze->callback([&] {
    action = [&] {
      const TaskSystem ts = load(file);
      std::string rta_text;
      json j = {{"utilization", utilization(ts).str()}, {"rta", rta_json(ts, rta_text)}};
      auto split = split_bound(ts);
      auto joint = joint_bound(ts);
      j["split_bound"] = opt_json(split);
      j["joint_bound"] = opt_json(joint);
      SearchConfig cfg;
      cfg.cap = analyze_cap;
      cfg.threads = g.threads;
      auto ex = exact_wcrt(ts, cfg);
      j["exact"] = exact_json(ts, ex);
      std::ostringstream os;
      os << "utilization  " << utilization(ts) << "\n" << rta_text << "split bound  " << opt_str(split) << "\njoint bound  " << opt_str(joint) << "\n";
      try {
        auto res = solve(build_model(ts, MilpVariant::Full));
        j["milp_full"] = {{"objective", res.objective.str()}, {"status", to_string(res.status)}};
        os << "milp (full)  " << res.objective << " [" << to_string(res.status) << "]\n";
      } catch (const ModelError& e) {
        j["milp_full"] = nullptr;
        os << "milp (full)  n/a (" << e.what() << ")\n";
      }
      os << "-- exact search --\n" << exact_text(ts, ex);
      emit(g, j, os.str());
      return kOk;
    };
  });

  auto* sim = app.add_subcommand("sim", "Simulate one release pattern and print the event log as TSV");
  std::string pattern_path, horizon_text;
  sim->add_option("file", file, "Task-set file")->required();
  sim->add_option("--pattern", pattern_path, "Release pattern JSON")->required();
  sim->add_option("--horizon", horizon_text, "Simulation horizon (p/q)");
  sim->callback([&] {
    action = [&] {
      const TaskSystem ts = load(file);
      const ReleasePattern rp = pattern_from_json(json::parse(read_file(pattern_path)));
      std::optional<Time> horizon;
      if (!horizon_text.empty()) horizon = Time::parse(horizon_text);
      const SimTrace tr = simulate(ts, rp, horizon);
      json arr = json::array(), fin = json::array();
      for (const auto& t : tr.seg_arrival) arr.push_back(t.str());
      for (const auto& t : tr.seg_finish) fin.push_back(t.str());
      json events = json::array();
      for (const auto& e : tr.events) events.push_back({{"time", e.time.str()}, {"event", to_string(e.kind)}, {"task", e.task}, {"index", e.index}});
      json j = {{"finished", tr.finished()}, {"ss_response", opt_json(tr.ss_response)}, {"seg_arrival", arr}, {"seg_finish", fin},
                {"horizon", tr.horizon.str()}, {"events", events}};
      emit(g, j, events_tsv(tr) + "# response " + opt_str(tr.ss_response) + (tr.finished() ? "" : " (unfinished before horizon " + tr.horizon.str() + ")") + "\n");
      return kOk;
    };
  });

  auto* rta = app.add_subcommand("rta", "Per-task WCRT of the hp tasks and all-periodic segment responses");
  rta->add_option("file", file, "Task-set file")->required();
  rta->callback([&] {
    action = [&] {
      const TaskSystem ts = load(file);
      std::string text;
      json j = rta_json(ts, text);
      emit(g, j, text);
      return kOk;
    };
  });

  auto* exact = app.add_subcommand("exact", "Exact WCRT of the segmented task by exhaustive search");
  std::string grid;
  bool no_prune = false;
  std::uint64_t cap = SearchConfig{}.cap;
  exact->add_option("file", file, "Task-set file")->required();
  exact->add_option("--grid", grid, "Also try first releases on this offset grid (p/q)");
  exact->add_flag("--no-prune", no_prune, "Disable the offset pruning rules");
  exact->add_option("--cap", cap, "Maximum window configurations explored");
  exact->callback([&] {
    action = [&] {
      const TaskSystem ts = load(file);
      SearchConfig cfg;
      if (!grid.empty()) cfg.offset_grid = Time::parse(grid);
      cfg.prune = !no_prune;
      cfg.cap = cap;
      cfg.threads = g.threads;
      auto r = exact_wcrt(ts, cfg);
      emit(g, exact_json(ts, r), exact_text(ts, r));
      return kOk;
    };
  });

  auto* milp = app.add_subcommand("milp", "Solve, export or check the response-time MILP");
  std::string variant = "full", lp_path, check_path;
  std::uint64_t budget = SolveBudget{}.max_nodes;
  milp->add_option("file", file, "Task-set file")->required();
  milp->add_option("--variant", variant, "Constraint set")->check(CLI::IsMember({"full", "no-bounds", "no-rel", "v1"}));
  milp->add_option("--export-lp", lp_path, "Write the model in CPLEX LP format");
  milp->add_option("--check", check_path, "Check an assignment JSON instead of solving");
  milp->add_option("--budget", budget, "Node budget for the solver");
  milp->callback([&] {
    action = [&] {
      const TaskSystem ts = load(file);
      const MilpModel model = build_model(ts, parse_variant(variant));
      json j = {{"variant", variant}};
      std::ostringstream os;
      os << "variant  " << variant << "\n";
      if (!lp_path.empty()) {
        std::ofstream out(lp_path);
        if (!out) throw ParseError("cannot write '" + lp_path + "'", 0, "");
        out << export_lp(model);
        j["lp_file"] = lp_path;
        os << "lp file  " << lp_path << "\n";
      }
      if (!check_path.empty()) {
        const MilpAssignment a = assignment_from_json(json::parse(read_file(check_path)));
        const CheckReport rep = check_assignment(model, a);
        json verdicts = json::array();
        for (const auto& v : rep.verdicts)
          verdicts.push_back({{"constraint", to_string(v.kind)}, {"task", v.task}, {"segment", v.segment}, {"ok", v.ok}, {"residual", v.residual.str()}});
        j["check"] = {{"feasible", rep.feasible}, {"objective", rep.objective.str()}, {"verdicts", verdicts}};
        os << "feasible " << (rep.feasible ? "yes" : "no") << "\nobjective " << rep.objective << "\n";
        for (const auto& v : rep.verdicts)
          if (!v.ok) os << "violated " << to_string(v.kind) << " task " << v.task << " segment " << v.segment << " residual " << v.residual << "\n";
      } else if (lp_path.empty()) {
        const SolveResult r = solve(model, SolveBudget{budget});
        j["objective"] = r.objective.str();
        j["status"] = to_string(r.status);
        j["nodes"] = r.nodes;
        j["budget_exhausted"] = r.budget_exhausted;
        j["used_offset_candidates"] = r.used_offset_candidates;
        j["undecided_leaves"] = r.undecided_leaves;
        j["best"] = to_json(r.best);
        os << "objective " << r.objective << " [" << to_string(r.status) << "]\nnodes    " << r.nodes << "\nbest     " << to_json(r.best).dump() << "\n";
      }
      emit(g, j, os.str());
      return kOk;
    };
  });

  std::int64_t M = 3, V = 4;
  std::string values, plant, red_variant = "constrained";
  auto* reduce = app.add_subcommand("reduce", "Emit the task set built from a 3-partition instance");
  reduce->add_option("--M", M, "Number of triples")->required();
  reduce->add_option("--V", V, "Triple sum")->required();
  reduce->add_option("--values", values, "Comma-separated values v2,...,v3M+1");
  reduce->add_option("--plant", plant, "Generate a YES or NO instance")->check(CLI::IsMember({"yes", "no"}));
  reduce->add_option("--variant", red_variant, "Reduction variant")->check(CLI::IsMember({"constrained", "implicit", "footnote-2V"}));
  bool unchecked = false;
  reduce->add_flag("--unchecked", unchecked, "Only require positive values summing to M*V (allows V < 5)");
  reduce->callback([&] {
    action = [&] {
      std::mt19937_64 rng(g.seed);
      const PartitionInstance p = instance_from(M, V, values, plant, rng);
      const auto rv = parse_reduction_variant(red_variant);
      const TaskSystem ts = unchecked ? build_reduction_unchecked(p, rv) : build_reduction(p, rv);
      json j = to_json(ts);
      j["schema"] = 1;
      std::cout << j.dump(2) << "\n";
      return kOk;
    };
  });

  auto* verify = app.add_subcommand("verify-theorem1", "Cross-check 3-partition, load evaluation and exact search on the reductions");
  verify->add_option("--M", M, "Number of triples")->required();
  verify->add_option("--V", V, "Triple sum");
  verify->add_option("--values", values, "Comma-separated values v2,...,v3M+1");
  verify->add_option("--plant", plant, "Generate a YES or NO instance")->check(CLI::IsMember({"yes", "no"}));
  verify->callback([&] {
    action = [&] {
      std::mt19937_64 rng(g.seed);
      if (verify->count("--V") == 0) V = plant == "no" ? 13 : 10;
      const PartitionInstance p = instance_from(M, V, values, plant, rng);
      const Theorem1Report r = verify_theorem1(p);
      auto word = [](bool miss) { return miss ? "miss" : "schedulable"; };
      json j = {{"M", p.M},
                {"V", p.V},
                {"values", p.values},
                {"partition_exists", r.partition_exists},
                {"evaluation", word(r.evaluation_misses)},
                {"exact_constrained", word(r.exact_misses_constrained)},
                {"exact_implicit", word(r.exact_misses_implicit)},
                {"exact_footnote", word(r.exact_misses_footnote)},
                {"exact_conclusive", r.exact_conclusive},
                {"hp_schedulable", r.hp_schedulable},
                {"agree", r.agree},
                {"detail", r.detail}};
      std::ostringstream os;
      os << "instance          M=" << p.M << " V=" << p.V << " values=" << json(p.values).dump() << "\n"
         << "3-partition       " << (r.partition_exists ? "exists" : "none") << "\n"
         << "load evaluation   " << word(r.evaluation_misses) << "\n"
         << "exact constrained " << word(r.exact_misses_constrained) << "\n"
         << "exact implicit    " << word(r.exact_misses_implicit) << "\n"
         << "exact footnote    " << word(r.exact_misses_footnote) << "\n"
         << "hp schedulable    " << (r.hp_schedulable ? "yes" : "no") << "\n"
         << "agreement         " << (r.agree ? "yes" : "NO") << "\n";
      emit(g, j, os.str());
      if (!r.agree) throw Falsification("verify-theorem1: verdicts disagree (" + r.detail + ")");
      return kOk;
    };
  });

  auto* gap = app.add_subcommand("gap", "Bounds and MILP pessimism ratio for the counterexample family");
  std::int64_t q = 2, gm = 2;
  std::string eps, sweep;
  bool cross = false;
  gap->add_option("--q", q, "Family parameter q >= 1");
  gap->add_option("--m", gm, "Number of segments m >= 2");
  gap->add_option("--eps", eps, "0 < eps < 1/q (default 1/(2q))");
  gap->add_option("--sweep", sweep, "Sweep m over a range at q = m, e.g. m=2..6");
  gap->add_flag("--exact", cross, "Cross-check the exact WCRT by search");
  gap->callback([&] {
    action = [&] {
      std::vector<GapFamilyParams> runs;
      if (!sweep.empty()) {
        std::int64_t lo = 0, hi = 0;
        char tail = 0;
        if (std::sscanf(sweep.c_str(), "m=%ld..%ld%c", &lo, &hi, &tail) != 2 || lo > hi) throw std::invalid_argument("--sweep expects m=A..B");
        for (std::int64_t k = lo; k <= hi; ++k) runs.push_back(GapFamilyParams::with_default_eps(k, k));
      } else {
        auto p = GapFamilyParams::with_default_eps(q, gm);
        if (!eps.empty()) p.eps = Time::parse(eps);
        runs.push_back(p);
      }
      json reports = json::array();
      std::ostringstream os;
      os << "q  m  eps  ub_seg  split  joint  exact  milp_lb  ratio  (4m+4)/9  meets  full-model\n";
      bool falsified = false;
      for (const auto& p : runs) {
        const BoundsReport r = ratio_report(p, cross);
        reports.push_back(report_json(r));
        if (r.threshold_applies && !r.meets_threshold) falsified = true;
        if (r.exact_by_search && *r.exact_by_search != r.exact) falsified = true;
        os << r.params.q << "  " << r.params.m << "  " << r.params.eps << "  " << r.ub_seg.front() << "  " << r.ub_split << "  " << r.ub_joint << "  "
           << r.exact << "  " << r.milp_lb << "  " << r.ratio << " (" << r.ratio.to_double() << ")  " << r.threshold << "  "
           << (r.threshold_applies ? (r.meets_threshold ? "yes" : "NO") : "n/a") << "  "
           << (r.full_model_feasible ? (*r.full_model_feasible ? "feasible" : "infeasible") : "n/a") << "\n";
      }
      emit(g, runs.size() == 1 ? reports.front() : json{{"reports", reports}}, os.str());
      if (falsified) throw Falsification("gap: a reported bound contradicts its cross-check");
      return kOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }
  try {
    return action();
  } catch (const Falsification& e) {
    std::cerr << "falsification: " << e.what() << "\n";
    return kFalsified;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << (e.field().empty() ? "" : " [field " + e.field() + "]") << "\n";
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kInputError;
  } catch (const PatternError& e) {
    std::cerr << "pattern error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::logic_error& e) {
    std::cerr << "falsification: " << e.what() << "\n";
    return kFalsified;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
