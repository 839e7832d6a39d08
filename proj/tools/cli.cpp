#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "apml/calculus.hpp"
#include "apml/derivation_io.hpp"
#include "apml/hilbert.hpp"
#include "apml/parse.hpp"
#include "apml/print.hpp"
#include "apml/scenarios.hpp"
#include "apml/search.hpp"
#include "apml/semantics.hpp"
#include "apml/transform.hpp"
#include "json.hpp"

namespace apml::cli {
namespace {

using nlohmann::json;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

Assumptions load_assumptions(const std::string& path) {
  if (path.empty()) return {};
  return parse_assumptions(read_file(path));
}

/// "2" is index 2 at the top level; "0.1/2" is index 2 inside item 1 of item 0.
Occurrence parse_occurrence(const std::string& text) {
  auto number = [&](const std::string& part) -> std::size_t {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos || part.size() > 9) {
      throw InputError("malformed path: " + text);
    }
    return std::stoul(part);
  };
  Occurrence occ;
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::stringstream steps(text.substr(0, slash));
    std::string part;
    while (std::getline(steps, part, '.')) occ.level.steps.push_back(number(part));
    occ.index = number(text.substr(slash + 1));
  } else {
    occ.index = number(text);
  }
  return occ;
}

struct Common {
  std::string format = "text";
  bool json() const { return format == "json"; }
};

void add_format(CLI::App* sub, Common& common) {
  sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "json"}));
}

json derivation_json(const Derivation& d) { return json::parse(derivation_to_json(d)); }

SearchConfig search_config(const Assumptions& assumptions, std::size_t max_depth, std::size_t max_nodes,
                           bool no_dup) {
  SearchConfig config;
  config.assumptions = assumptions;
  config.max_depth = max_depth;
  config.max_nodes = max_nodes;
  config.duplicate_boxl_principal = !no_dup;
  return config;
}

int prove_exit(const SearchOutcome& r) {
  if (r.verdict == Verdict::Proved) return kAnswered;
  if (r.verdict == Verdict::Refuted) return kRefuted;
  return r.stats.bound_hit ? kBoundsExhausted : kRefuted;
}

std::string describe_unproved(const SearchOutcome& r) {
  return r.stats.bound_hit ? "not proved within bounds" : "not provable: search space exhausted";
}

int cmd_prove(const std::string& text, const std::string& assn, std::size_t max_depth, std::size_t max_nodes,
              bool no_dup, const std::string& emit, const Common& common, std::ostream& out) {
  const Sequent s = parse_sequent(text);
  const SearchOutcome r = prove(s, search_config(load_assumptions(assn), max_depth, max_nodes, no_dup));
  if (r.verdict == Verdict::Proved && !emit.empty()) write_file(emit, derivation_to_json(r.derivation) + "\n");
  if (common.json()) {
    json doc{{"sequent", to_string(s)}, {"verdict", verdict_name(r.verdict)}, {"stats", json::parse(stats_to_json(r.stats))}};
    if (r.derivation) doc["derivation"] = derivation_json(r.derivation);
    out << doc.dump(2) << "\n";
  } else if (r.verdict == Verdict::Proved) {
    out << "proved: " << to_string(s) << "\n" << derivation_to_text(r.derivation);
  } else {
    out << describe_unproved(r) << ": " << to_string(s) << " (" << r.stats.nodes << " nodes)\n";
  }
  return prove_exit(r);
}

int cmd_decide(const std::string& text, const std::string& assn, int worlds, std::size_t max_depth,
               std::size_t max_nodes, const Common& common, std::ostream& out) {
  const Sequent s = parse_sequent(text);
  CountermodelBounds bounds;
  bounds.max_worlds = worlds;
  const SearchOutcome r = decide(s, search_config(load_assumptions(assn), max_depth, max_nodes, false), bounds);
  if (common.json()) {
    json doc{{"sequent", to_string(s)}, {"verdict", verdict_name(r.verdict)}, {"stats", json::parse(stats_to_json(r.stats))}};
    if (r.derivation) doc["derivation"] = derivation_json(r.derivation);
    if (r.countermodel) doc["countermodel"] = json::parse(countermodel_to_json(*r.countermodel));
    out << doc.dump(2) << "\n";
  } else if (r.verdict == Verdict::Proved) {
    out << "proved: " << to_string(s) << "\n" << derivation_to_text(r.derivation);
  } else if (r.verdict == Verdict::Refuted) {
    out << "refuted: " << to_string(s) << "\n" << countermodel_to_text(*r.countermodel);
  } else {
    out << describe_unproved(r) << ": " << to_string(s) << "\n";
  }
  return prove_exit(r);
}

int cmd_check(const std::string& file, const std::string& assn, bool allow_cut, const Common& common,
              std::ostream& out) {
  const Derivation d = derivation_from_json(read_file(file));
  const CheckResult result = check(d, load_assumptions(assn), CheckOptions{allow_cut});
  if (common.json()) {
    json rejections = json::array();
    for (const auto& r : result.rejections) {
      rejections.push_back({{"node", r.node}, {"rule", r.rule}, {"expected", r.expected}, {"found", r.found}});
    }
    out << json{{"ok", result.ok()}, {"nodes", d->node_count}, {"height", d->height}, {"cuts", d->cut_count},
                {"rejections", rejections}}
               .dump(2)
        << "\n";
  } else if (result.ok()) {
    out << "ok: " << to_string(d->conclusion) << " (" << d->node_count << " nodes, height " << d->height
        << ", " << d->cut_count << " cuts)\n";
  } else {
    out << "rejected:\n" << result.report();
  }
  return result.ok() ? kAnswered : kInputError;
}

int cmd_elimcut(const std::string& f1, const std::string& f2, const std::string& path, const std::string& assn,
                const std::string& emit, bool trace, const Common& common, std::ostream& out) {
  const Derivation d1 = derivation_from_json(read_file(f1));
  const Derivation d2 = derivation_from_json(read_file(f2));
  const Occurrence occ = parse_occurrence(path);
  if (!valid_occurrence(d2->conclusion.antecedent, occ)) throw InputError("path does not address an item: " + path);
  CutOptions options;
  options.assumptions = load_assumptions(assn);
  CutReport report;
  Derivation d;
  try {
    d = eliminate_cut(d1, d2, occ, options, &report);
  } catch (const TransformError& e) {
    throw InputError(e.what());
  }
  if (!emit.empty()) write_file(emit, derivation_to_json(d) + "\n");
  if (common.json()) {
    out << json{{"conclusion", to_string(d->conclusion)},
                {"calls", report.calls},
                {"max_depth", report.max_depth},
                {"cases", report.labels},
                {"derivation", derivation_json(d)}}
               .dump(2)
        << "\n";
    return kAnswered;
  }
  out << "cut eliminated: " << to_string(d->conclusion) << " (" << report.calls << " reduction calls, "
      << d->node_count << " nodes)\n";
  if (trace) {
    std::map<std::string, std::size_t> counts;
    for (const auto& l : report.labels) ++counts[l];
    for (const auto& [label, n] : counts) out << "  " << label << " x" << n << "\n";
  }
  if (emit.empty()) out << derivation_to_text(d);
  return kAnswered;
}

int cmd_countermodel(const std::string& text, const std::string& assn, int worlds, const Common& common,
                     std::ostream& out) {
  const Sequent s = parse_sequent(text);
  CountermodelBounds bounds;
  bounds.max_worlds = worlds;
  const auto model = find_countermodel(s, bounds, load_assumptions(assn));
  if (common.json()) {
    json doc{{"sequent", to_string(s)}, {"found", model.has_value()}};
    if (model) doc["countermodel"] = json::parse(countermodel_to_json(*model));
    out << doc.dump(2) << "\n";
  } else if (model) {
    out << "countermodel for " << to_string(s) << "\n" << countermodel_to_text(*model);
  } else {
    out << "no countermodel with at most " << worlds << " worlds: " << to_string(s) << "\n";
  }
  return model ? kRefuted : kBoundsExhausted;
}

struct MuddyArgs {
  std::optional<int> n;
  std::optional<int> k;
  std::string round = "before_father";
  bool liar = false;
  std::string config;
  std::string export_assn;
};

int cmd_muddy(const MuddyArgs& a, const Common& common, std::ostream& out) {
  MuddyConfig config;
  if (!a.config.empty()) {
    config = muddy_config_from_json(read_file(a.config));
  } else {
    if (!a.n) throw InputError("--n is required without --config");
    config.n = *a.n;
    config.variant = a.liar ? MuddyVariant::Liar : MuddyVariant::Honest;
    config.k = a.k.value_or(a.liar ? 0 : config.n);
    config.round = parse_round(a.round);
  }
  validate(config);
  const Assumptions assumptions = build_assumptions(config);
  if (!a.export_assn.empty()) write_file(a.export_assn, format_assumptions(assumptions));

  SearchConfig sc;
  sc.assumptions = assumptions;
  bool all_as_expected = true;
  json rows = json::array();
  if (!common.json()) out << describe(config) << ": " << assumptions.size() << " assumption rules\n";
  for (const MuddyQuery& q : build_queries(config)) {
    const SearchOutcome r = decide(q.sequent, sc);
    const bool proved = r.verdict == Verdict::Proved;
    const bool as_expected = proved == q.expect_provable;
    all_as_expected = all_as_expected && as_expected;
    if (common.json()) {
      rows.push_back({{"label", q.label},
                      {"sequent", to_string(q.sequent)},
                      {"expected", q.expect_provable ? "provable" : "unprovable"},
                      {"verdict", verdict_name(r.verdict)},
                      {"as_expected", as_expected}});
    } else {
      out << (as_expected ? "  ok   " : "  FAIL ") << q.label << ": " << to_string(q.sequent) << "  expected "
          << (q.expect_provable ? "provable" : "unprovable") << ", " << verdict_name(r.verdict) << "\n";
    }
  }
  if (common.json()) {
    out << json{{"config", json::parse(muddy_config_to_json(config))},
                {"assumptions", assumptions.size()},
                {"queries", rows},
                {"as_expected", all_as_expected}}
               .dump(2)
        << "\n";
  }
  return all_as_expected ? kAnswered : kRefuted;
}

int cmd_laws(int worlds, int agent_count, const Common& common, std::ostream& out) {
  if (worlds < 1 || worlds > kMaxWorlds) throw InputError("--worlds must be between 1 and " + std::to_string(kMaxWorlds));
  if (agent_count < 0 || agent_count > 3) throw InputError("--agents must be between 0 and 3");
  std::vector<Agent> agents;
  for (int a = 0; a < agent_count; ++a) agents.emplace_back(std::string(1, static_cast<char>('A' + a)));
  std::map<std::string, std::size_t> violations;
  for (const auto& law : dlam_laws()) violations[law] = 0;
  std::size_t algebras = 0;
  std::vector<std::string> examples;
  for (int n = 1; n <= worlds; ++n) {
    for (const KripkeFrame& frame : canonical_frames(n, agents)) {
      ++algebras;
      const DlamReport report = dlam_validate(complex_algebra(frame));
      for (const auto& v : report.violations) {
        ++violations[v.law];
        if (examples.size() < 5) examples.push_back(v.law + ": " + v.witness);
      }
    }
  }
  std::size_t total = 0;
  for (const auto& [law, n] : violations) total += n;
  if (common.json()) {
    out << json{{"worlds", worlds}, {"agents", agent_count}, {"algebras", algebras}, {"violations", violations}}.dump(2)
        << "\n";
  } else {
    out << algebras << " complex algebras (up to " << worlds << " worlds, " << agent_count << " agents)\n";
    for (const auto& law : dlam_laws()) out << "  " << law << ": " << violations[law] << " violations\n";
    for (const auto& e : examples) out << "  e.g. " << e << "\n";
  }
  return total == 0 ? kAnswered : kRefuted;
}

int cmd_hilbert(const std::string& file, const Common& common, std::ostream& out) {
  const HilbertDerivation d = hilbert_from_json(read_file(file));
  const HilbertCheck result = check_hilbert(d);
  if (common.json()) {
    json rejections = json::array();
    for (const auto& r : result.rejections) rejections.push_back({{"step", r.step}, {"message", r.message}});
    out << json{{"ok", result.ok()}, {"steps", d.steps.size()}, {"rejections", rejections}}.dump(2) << "\n";
  } else if (result.ok()) {
    out << "ok: " << (d.steps.empty() ? std::string("(empty)") : to_string(d.steps.back().conclusion)) << " ("
        << d.steps.size() << " steps)\n";
  } else {
    out << "rejected:\n" << result.report();
  }
  return result.ok() ? kAnswered : kInputError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prover, refuter and derivation tools for adjoint positive modal logic", "apml"};
  app.require_subcommand(1);
  Common common;

  std::string sequent;
  std::string assn;
  std::string emit;
  std::size_t max_depth = SearchConfig{}.max_depth;
  std::size_t max_nodes = SearchConfig{}.max_nodes;
  bool no_dup = false;
  int worlds = 3;

  auto* prove_cmd = app.add_subcommand("prove", "Backward proof search");
  prove_cmd->add_option("sequent", sequent, "Sequent, e.g. \"<A>([A](p)) |- p\"")->required();
  prove_cmd->add_option("--assn", assn, "Assumption file (assn <agent> <atom> => <atom> | ...)");
  prove_cmd->add_option("--max-depth", max_depth, "Longest branch");
  prove_cmd->add_option("--max-nodes", max_nodes, "Node budget");
  prove_cmd->add_flag("--no-dup", no_dup, "Debug: BoxL drops its principal item");
  prove_cmd->add_option("--emit", emit, "Write the proof as JSON");
  add_format(prove_cmd, common);

  auto* decide_cmd = app.add_subcommand("decide", "Proof search and countermodel search side by side");
  decide_cmd->add_option("sequent", sequent, "Sequent")->required();
  decide_cmd->add_option("--assn", assn, "Assumption file");
  decide_cmd->add_option("--worlds", worlds, "Largest countermodel")->check(CLI::Range(1, kMaxWorlds));
  decide_cmd->add_option("--max-depth", max_depth, "Longest branch");
  decide_cmd->add_option("--max-nodes", max_nodes, "Node budget");
  add_format(decide_cmd, common);

  std::string file;
  std::string file2;
  bool allow_cut = false;
  auto* check_cmd = app.add_subcommand("check", "Check a derivation file");
  check_cmd->add_option("file", file, "Derivation JSON")->required();
  check_cmd->add_option("--assn", assn, "Assumption file");
  check_cmd->add_flag("--allow-cut", allow_cut, "Accept Cut nodes");
  add_format(check_cmd, common);

  std::string path;
  bool trace = false;
  auto* elim_cmd = app.add_subcommand("elimcut", "Eliminate a cut between two derivations");
  elim_cmd->add_option("d1", file, "Derivation of Γ |- m")->required();
  elim_cmd->add_option("d2", file2, "Derivation of Δ[m] |- m'")->required();
  elim_cmd->add_option("--path", path, "Occurrence of m in d2: index, or steps/index such as 0.1/2")->required();
  elim_cmd->add_option("--assn", assn, "Assumption file");
  elim_cmd->add_option("--emit", emit, "Write the result as JSON");
  elim_cmd->add_flag("--trace", trace, "Print reduction case counts");
  add_format(elim_cmd, common);

  auto* cm_cmd = app.add_subcommand("countermodel", "Search for a finite countermodel");
  cm_cmd->add_option("sequent", sequent, "Sequent")->required();
  cm_cmd->add_option("--assn", assn, "Assumption file");
  cm_cmd->add_option("--worlds", worlds, "Largest model")->check(CLI::Range(1, kMaxWorlds));
  add_format(cm_cmd, common);

  MuddyArgs muddy;
  auto* muddy_cmd = app.add_subcommand("muddy", "Muddy children queries");
  muddy_cmd->add_option("--n", muddy.n, "Children");
  muddy_cmd->add_option("--k", muddy.k, "Muddy children (1..k)");
  muddy_cmd->add_option("--round", muddy.round, "before_father | after_father | after_round(r)");
  muddy_cmd->add_flag("--liar", muddy.liar, "Father announces falsely; nobody is muddy");
  muddy_cmd->add_option("--config", muddy.config, "Scenario JSON {n, k, round, variant}");
  muddy_cmd->add_option("--export-assn", muddy.export_assn, "Write the assumption rules");
  add_format(muddy_cmd, common);

  int agent_count = 2;
  auto* laws_cmd = app.add_subcommand("laws", "Validate algebra laws on every complex algebra");
  laws_cmd->add_option("--worlds", worlds, "Largest frame");
  laws_cmd->add_option("--agents", agent_count, "Number of agents");
  add_format(laws_cmd, common);

  auto* hilbert_cmd = app.add_subcommand("hilbert", "Check a Hilbert-style derivation file");
  hilbert_cmd->add_option("file", file, "Hilbert derivation JSON")->required();
  add_format(hilbert_cmd, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kAnswered : kInputError;
  }

  try {
    if (prove_cmd->parsed()) return cmd_prove(sequent, assn, max_depth, max_nodes, no_dup, emit, common, out);
    if (decide_cmd->parsed()) return cmd_decide(sequent, assn, worlds, max_depth, max_nodes, common, out);
    if (check_cmd->parsed()) return cmd_check(file, assn, allow_cut, common, out);
    if (elim_cmd->parsed()) return cmd_elimcut(file, file2, path, assn, emit, trace, common, out);
    if (cm_cmd->parsed()) return cmd_countermodel(sequent, assn, worlds, common, out);
    if (muddy_cmd->parsed()) return cmd_muddy(muddy, common, out);
    if (laws_cmd->parsed()) return cmd_laws(worlds, agent_count, common, out);
    if (hilbert_cmd->parsed()) return cmd_hilbert(file, common, out);
  } catch (const SyntaxError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const RuleError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const PathError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const SemanticsError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace apml::cli
