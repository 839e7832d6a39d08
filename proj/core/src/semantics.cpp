#include "apml/semantics.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "apml/print.hpp"
#include "json.hpp"

namespace apml {

namespace {

WorldSet bit(int w) { return WorldSet{1} << w; }

WorldSet up_of(const std::vector<WorldSet>& down, int n, int w) {
  WorldSet up = 0;
  for (int u = 0; u < n; ++u) {
    if ((down[u] >> w & 1U) != 0) up |= bit(u);
  }
  return up;
}

WorldSet permute_set(WorldSet s, const std::vector<int>& perm) {
  WorldSet out = 0;
  for (std::size_t w = 0; w < perm.size(); ++w) {
    if ((s >> w & 1U) != 0) out |= bit(perm[w]);
  }
  return out;
}

std::vector<WorldSet> permute_table(const std::vector<WorldSet>& table, const std::vector<int>& perm) {
  std::vector<WorldSet> out(table.size());
  for (std::size_t w = 0; w < table.size(); ++w) out[perm[w]] = permute_set(table[w], perm);
  return out;
}

std::uint32_t pack(const std::vector<WorldSet>& table, int n) {
  std::uint32_t code = 0;
  for (int w = 0; w < n; ++w) code |= table[w] << (w * n);
  return code;
}

std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Frame code: order table then one table per agent.
std::vector<std::uint32_t> frame_code(const std::vector<WorldSet>& down,
                                      const std::vector<std::vector<WorldSet>>& succ, int n) {
  std::vector<std::uint32_t> code;
  code.push_back(pack(down, n));
  for (const auto& r : succ) code.push_back(pack(r, n));
  return code;
}

std::vector<std::uint32_t> permuted_frame_code(const std::vector<WorldSet>& down,
                                               const std::vector<std::vector<WorldSet>>& succ, int n,
                                               const std::vector<int>& perm) {
  std::vector<std::vector<WorldSet>> ps;
  for (const auto& r : succ) ps.push_back(permute_table(r, perm));
  return frame_code(permute_table(down, perm), ps, n);
}

bool closed(int n, const std::vector<WorldSet>& down, const std::vector<WorldSet>& succ) {
  for (int z = 0; z < n; ++z) {
    const WorldSet up = up_of(down, n, z);
    for (int y = 0; y < n; ++y) {
      if ((succ[z] >> y & 1U) == 0) continue;
      for (int u = 0; u < n; ++u) {
        if ((up >> u & 1U) != 0 && (succ[u] & down[y]) != down[y]) return false;
      }
    }
  }
  return true;
}

// Flat evaluation program over a fixed atom and agent numbering.
struct Program {
  struct Op {
    FormulaKind kind;
    int a = -1;
    int b = -1;
    int index = -1;  // atom or agent slot; -1 for an absent agent
  };
  std::vector<Op> ops;
  int root = -1;
};

int compile(const Formula& f, const std::vector<std::string>& atoms, const std::vector<Agent>& agents,
            Program& prog) {
  Program::Op op{f.kind()};
  switch (f.kind()) {
    case FormulaKind::Atom: {
      auto it = std::find(atoms.begin(), atoms.end(), f.name());
      if (it == atoms.end()) throw SemanticsError("no valuation for atom " + f.name());
      op.index = static_cast<int>(it - atoms.begin());
      break;
    }
    case FormulaKind::And:
    case FormulaKind::Or:
      op.a = compile(f.left(), atoms, agents, prog);
      op.b = compile(f.right(), atoms, agents, prog);
      break;
    case FormulaKind::Dia:
    case FormulaKind::Box: {
      op.a = compile(f.body(), atoms, agents, prog);
      auto it = std::find(agents.begin(), agents.end(), f.agent());
      op.index = it == agents.end() ? -1 : static_cast<int>(it - agents.begin());
      break;
    }
    default:
      break;
  }
  prog.ops.push_back(op);
  prog.root = static_cast<int>(prog.ops.size()) - 1;
  return prog.root;
}

void run(const Program& prog, const KripkeFrame& frame, const std::vector<WorldSet>& val,
         std::vector<WorldSet>& reg) {
  const WorldSet all = frame.all();
  reg.resize(prog.ops.size());
  for (std::size_t i = 0; i < prog.ops.size(); ++i) {
    const auto& op = prog.ops[i];
    WorldSet r = 0;
    switch (op.kind) {
      case FormulaKind::Bot:
        r = 0;
        break;
      case FormulaKind::Top:
        r = all;
        break;
      case FormulaKind::Atom:
        r = val[op.index];
        break;
      case FormulaKind::And:
        r = reg[op.a] & reg[op.b];
        break;
      case FormulaKind::Or:
        r = reg[op.a] | reg[op.b];
        break;
      case FormulaKind::Dia:
        if (op.index >= 0) {
          const auto& succ = frame.succ[op.index];
          const WorldSet s = reg[op.a];
          for (int v = 0; v < frame.worlds; ++v) {
            if ((s >> v & 1U) != 0) r |= succ[v];
          }
        }
        break;
      case FormulaKind::Box:
        if (op.index < 0) {
          r = all;
        } else {
          const auto& succ = frame.succ[op.index];
          const WorldSet s = reg[op.a];
          for (int w = 0; w < frame.worlds; ++w) {
            if ((succ[w] & ~s) == 0) r |= bit(w);
          }
        }
        break;
    }
    reg[i] = r;
  }
}

// Antecedent translation and succedent compiled into one program.
struct SequentProgram {
  Program ant;
  Program suc;
  std::vector<WorldSet> reg;

  SequentProgram(const Sequent& seq, const std::vector<std::string>& atoms, const std::vector<Agent>& agents) {
    compile(translate(seq.antecedent), atoms, agents, ant);
    compile(seq.succedent, atoms, agents, suc);
  }

  // Worlds where the antecedent holds and the succedent fails.
  WorldSet failures(const KripkeFrame& frame, const std::vector<WorldSet>& val) {
    run(ant, frame, val, reg);
    const WorldSet a = reg[ant.root];
    run(suc, frame, val, reg);
    return a & ~reg[suc.root];
  }

  WorldSet eval(Program& p, const KripkeFrame& frame, const std::vector<WorldSet>& val) {
    run(p, frame, val, reg);
    return reg[p.root];
  }
};

std::vector<std::string> valuation_atoms(const KripkeStructure& s) {
  std::vector<std::string> atoms;
  for (const auto& [name, _] : s.valuation) atoms.push_back(name);
  return atoms;
}

std::vector<WorldSet> valuation_vector(const KripkeStructure& s) {
  std::vector<WorldSet> val;
  for (const auto& [_, set] : s.valuation) val.push_back(set);
  return val;
}

// Calls visit on every tuple of `count` entries drawn from choices.
template <typename Visit>
bool for_each_tuple(const std::vector<WorldSet>& choices, std::size_t count, Visit&& visit) {
  std::vector<std::size_t> idx(count, 0);
  std::vector<WorldSet> tuple(count, choices.empty() ? 0 : choices[0]);
  while (true) {
    if (!visit(tuple)) return false;
    std::size_t k = 0;
    while (k < count) {
      if (++idx[k] < choices.size()) {
        tuple[k] = choices[idx[k]];
        break;
      }
      idx[k] = 0;
      tuple[k] = choices[0];
      ++k;
    }
    if (k == count) return true;
  }
}

KripkeFrame make_frame(int n, std::vector<WorldSet> down, std::vector<Agent> agents,
                       std::vector<std::vector<WorldSet>> succ) {
  KripkeFrame f;
  f.worlds = n;
  f.down = std::move(down);
  f.agents = std::move(agents);
  f.succ = std::move(succ);
  return f;
}

}  // namespace

bool KripkeFrame::related(const Agent& a, int w, int v) const {
  const auto* r = relation(a);
  return r != nullptr && ((*r)[w] >> v & 1U) != 0;
}

const std::vector<WorldSet>* KripkeFrame::relation(const Agent& a) const {
  auto it = std::find(agents.begin(), agents.end(), a);
  return it == agents.end() ? nullptr : &succ[it - agents.begin()];
}

bool KripkeFrame::is_downset(WorldSet s) const {
  for (int w = 0; w < worlds; ++w) {
    if ((s >> w & 1U) != 0 && (down[w] & ~s) != 0) return false;
  }
  return true;
}

std::vector<std::string> frame_violations(const KripkeFrame& f) {
  std::vector<std::string> out;
  const int n = f.worlds;
  if (static_cast<int>(f.down.size()) != n) return {"order table has wrong size"};
  for (int w = 0; w < n; ++w) {
    if (!f.leq(w, w)) out.push_back("order not reflexive at " + std::to_string(w));
    for (int v = 0; v < n; ++v) {
      if (v != w && f.leq(v, w) && f.leq(w, v)) {
        out.push_back("order not antisymmetric at " + std::to_string(v) + "," + std::to_string(w));
      }
      for (int u = 0; u < n; ++u) {
        if (f.leq(u, v) && f.leq(v, w) && !f.leq(u, w)) {
          out.push_back("order not transitive at " + std::to_string(u) + "," + std::to_string(v) + "," +
                        std::to_string(w));
        }
      }
    }
  }
  if (f.succ.size() != f.agents.size()) out.push_back("relation count differs from agent count");
  for (std::size_t a = 0; a < f.succ.size() && a < f.agents.size(); ++a) {
    // u ≥ z, z R y, y ≥ x  ⇒  u R x
    for (int u = 0; u < n; ++u)
      for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
          for (int x = 0; x < n; ++x) {
            if (f.leq(z, u) && (f.succ[a][z] >> y & 1U) != 0 && f.leq(x, y) &&
                (f.succ[a][u] >> x & 1U) == 0) {
              out.push_back("frame condition fails for agent " + f.agents[a].name + " at " +
                            std::to_string(u) + "," + std::to_string(z) + "," + std::to_string(y) +
                            "," + std::to_string(x));
            }
          }
  }
  return out;
}

std::vector<std::string> structure_violations(const KripkeStructure& s) {
  std::vector<std::string> out = frame_violations(s.frame);
  for (const auto& [atom, set] : s.valuation) {
    if ((set & ~s.frame.all()) != 0 || !s.frame.is_downset(set)) {
      out.push_back("valuation of " + atom + " is not a down-set");
    }
  }
  return out;
}

bool eval_kripke(const KripkeStructure& s, int world, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Bot:
      return false;
    case FormulaKind::Top:
      return true;
    case FormulaKind::Atom: {
      auto it = s.valuation.find(f.name());
      if (it == s.valuation.end()) throw SemanticsError("no valuation for atom " + f.name());
      return (it->second >> world & 1U) != 0;
    }
    case FormulaKind::And:
      return eval_kripke(s, world, f.left()) && eval_kripke(s, world, f.right());
    case FormulaKind::Or:
      return eval_kripke(s, world, f.left()) || eval_kripke(s, world, f.right());
    case FormulaKind::Dia:
      for (int v = 0; v < s.frame.worlds; ++v) {
        if (s.frame.related(f.agent(), v, world) && eval_kripke(s, v, f.body())) return true;
      }
      return false;
    case FormulaKind::Box:
      for (int v = 0; v < s.frame.worlds; ++v) {
        if (s.frame.related(f.agent(), world, v) && !eval_kripke(s, v, f.body())) return false;
      }
      return true;
  }
  return false;
}

WorldSet truth_set(const KripkeStructure& s, const Formula& f) {
  Program prog;
  compile(f, valuation_atoms(s), s.frame.agents, prog);
  std::vector<WorldSet> reg;
  run(prog, s.frame, valuation_vector(s), reg);
  return reg[prog.root];
}

bool sequent_true_kripke(const KripkeStructure& s, const Sequent& seq) {
  SequentProgram prog(seq, valuation_atoms(s), s.frame.agents);
  return prog.failures(s.frame, valuation_vector(s)) == 0;
}

const std::vector<std::vector<WorldSet>>& labeled_orders(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<std::vector<WorldSet>>> cache;
  if (n < 1 || n > kMaxWorlds) throw SemanticsError("world count out of range");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<int, int>> pairs;
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w)
      if (v != w) pairs.emplace_back(v, w);
  std::vector<std::vector<WorldSet>> out;
  for (std::uint32_t bits = 0; bits < (1U << pairs.size()); ++bits) {
    std::vector<WorldSet> down(n);
    for (int w = 0; w < n; ++w) down[w] = bit(w);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if ((bits >> i & 1U) != 0) down[pairs[i].second] |= bit(pairs[i].first);
    }
    bool ok = true;
    for (int v = 0; v < n && ok; ++v)
      for (int w = 0; w < n && ok; ++w) {
        if (v != w && (down[w] >> v & 1U) != 0 && (down[v] >> w & 1U) != 0) ok = false;
        // transitivity: v ≤ w ⇒ down[v] ⊆ down[w]
        if ((down[w] >> v & 1U) != 0 && (down[v] & ~down[w]) != 0) ok = false;
      }
    if (ok) out.push_back(std::move(down));
  }
  return cache.emplace(n, std::move(out)).first->second;
}

std::vector<std::vector<WorldSet>> closed_relations(int n, const std::vector<WorldSet>& down) {
  std::vector<std::vector<WorldSet>> out;
  const std::uint32_t total = 1U << (n * n);
  const WorldSet row = bit(n) - 1;
  for (std::uint32_t bits = 0; bits < total; ++bits) {
    std::vector<WorldSet> succ(n);
    for (int w = 0; w < n; ++w) succ[w] = (bits >> (w * n)) & row;
    if (closed(n, down, succ)) out.push_back(std::move(succ));
  }
  return out;
}

std::vector<WorldSet> downsets(int n, const std::vector<WorldSet>& down) {
  std::vector<WorldSet> out;
  for (WorldSet s = 0; s < bit(n); ++s) {
    bool ok = true;
    for (int w = 0; w < n && ok; ++w) {
      if ((s >> w & 1U) != 0 && (down[w] & ~s) != 0) ok = false;
    }
    if (ok) out.push_back(s);
  }
  return out;
}

namespace {

// Agents are positional in frames; these carry placeholder names a0, a1, ...
const std::vector<KripkeFrame>& frames_by_count(int n, std::size_t k) {
  static std::mutex mu;
  static std::map<std::pair<int, std::size_t>, std::vector<KripkeFrame>> cache;
  if (n < 1 || n > kMaxWorlds) throw SemanticsError("world count out of range");
  const auto key = std::make_pair(n, k);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  std::vector<Agent> agents;
  for (std::size_t a = 0; a < k; ++a) agents.emplace_back("a" + std::to_string(a));
  const auto perms = permutations(n);
  std::vector<KripkeFrame> out;
  for (const auto& down : labeled_orders(n)) {
    const auto rels = closed_relations(n, down);
    std::vector<std::size_t> idx(k, 0);
    while (true) {
      std::vector<std::vector<WorldSet>> succ;
      for (std::size_t a = 0; a < k; ++a) succ.push_back(rels[idx[a]]);
      const auto code = frame_code(down, succ, n);
      bool minimal = true;
      for (const auto& p : perms) {
        if (permuted_frame_code(down, succ, n, p) < code) {
          minimal = false;
          break;
        }
      }
      if (minimal) out.push_back(make_frame(n, down, agents, std::move(succ)));
      std::size_t a = 0;
      while (a < k && ++idx[a] == rels.size()) idx[a++] = 0;
      if (a == k) break;
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::move(out)).first->second;
}

}  // namespace

const std::vector<KripkeFrame>& canonical_frames(int n, const std::vector<Agent>& agents) {
  static std::mutex mu;
  static std::map<std::pair<int, std::vector<Agent>>, std::vector<KripkeFrame>> cache;
  const auto& base = frames_by_count(n, agents.size());
  const auto key = std::make_pair(n, agents);
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<KripkeFrame> out = base;
  for (auto& f : out) f.agents = agents;
  return cache.emplace(key, std::move(out)).first->second;
}

void enumerate_structures(const KripkeBounds& bounds,
                          const std::function<bool(const KripkeStructure&)>& visit) {
  for (int n = 1; n <= bounds.max_worlds; ++n) {
    const auto perms = permutations(n);
    for (const KripkeFrame& frame : canonical_frames(n, bounds.agents)) {
      const auto code = frame_code(frame.down, frame.succ, n);
      std::vector<const std::vector<int>*> autos;
      for (const auto& p : perms) {
        if (permuted_frame_code(frame.down, frame.succ, n, p) == code) autos.push_back(&p);
      }
      const auto choices = downsets(n, frame.down);
      const bool go_on = for_each_tuple(choices, bounds.atoms.size(), [&](const std::vector<WorldSet>& val) {
        for (const auto* p : autos) {
          std::vector<WorldSet> image(val.size());
          for (std::size_t i = 0; i < val.size(); ++i) image[i] = permute_set(val[i], *p);
          if (image < val) return true;
        }
        KripkeStructure s{frame, {}};
        for (std::size_t i = 0; i < val.size(); ++i) s.valuation[bounds.atoms[i]] = val[i];
        return visit(s);
      });
      if (!go_on) return;
    }
  }
}

std::size_t count_structures(const KripkeBounds& bounds) {
  std::size_t count = 0;
  enumerate_structures(bounds, [&](const KripkeStructure&) {
    ++count;
    return true;
  });
  return count;
}

std::size_t count_structures_naive(int n, int agents, int atoms) {
  if (n < 1 || n > 3) throw SemanticsError("naive count supports 1..3 worlds");
  const auto perms = permutations(n);
  const int cells = n * n;
  const std::uint64_t total_bits = static_cast<std::uint64_t>(cells) * (1 + agents) + n * atoms;
  if (total_bits > 30) throw SemanticsError("naive count too large");
  std::vector<Agent> names;
  for (int a = 0; a < agents; ++a) names.emplace_back(std::string(1, static_cast<char>('A' + a)));
  std::set<std::vector<std::uint32_t>> seen;
  const WorldSet row = bit(n) - 1;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << total_bits); ++bits) {
    std::uint64_t rest = bits;
    auto take = [&](int width) {
      const std::uint32_t v = static_cast<std::uint32_t>(rest & ((std::uint64_t{1} << width) - 1));
      rest >>= width;
      return v;
    };
    KripkeStructure s;
    s.frame.worlds = n;
    s.frame.agents = names;
    const std::uint32_t order = take(cells);
    for (int w = 0; w < n; ++w) s.frame.down.push_back((order >> (w * n)) & row);
    for (int a = 0; a < agents; ++a) {
      const std::uint32_t r = take(cells);
      std::vector<WorldSet> succ;
      for (int w = 0; w < n; ++w) succ.push_back((r >> (w * n)) & row);
      s.frame.succ.push_back(std::move(succ));
    }
    for (int i = 0; i < atoms; ++i) s.valuation["q" + std::to_string(i)] = take(n);
    if (!structure_violations(s).empty()) continue;
    std::vector<std::uint32_t> best;
    for (const auto& p : perms) {
      std::vector<std::uint32_t> code = permuted_frame_code(s.frame.down, s.frame.succ, n, p);
      for (const auto& [_, set] : s.valuation) code.push_back(permute_set(set, p));
      if (best.empty() || code < best) best = std::move(code);
    }
    seen.insert(std::move(best));
  }
  return seen.size();
}

std::optional<Countermodel> find_violation(const Sequent& seq, int max_worlds, const std::vector<Agent>& agents) {
  const std::vector<std::string> atoms = atoms_of(seq);
  SequentProgram prog(seq, atoms, agents);
  for (int n = 1; n <= max_worlds; ++n) {
    for (const KripkeFrame& frame : canonical_frames(n, agents)) {
      std::optional<Countermodel> found;
      for_each_tuple(downsets(n, frame.down), atoms.size(), [&](const std::vector<WorldSet>& val) {
        const WorldSet bad = prog.failures(frame, val);
        if (bad == 0) return true;
        Countermodel m{KripkeStructure{frame, {}}, std::countr_zero(bad)};
        for (std::size_t i = 0; i < atoms.size(); ++i) m.structure.valuation[atoms[i]] = val[i];
        found = std::move(m);
        return false;
      });
      if (found) return found;
    }
  }
  return std::nullopt;
}

std::vector<std::string> relevant_atoms(const Sequent& seq, const Assumptions& assumptions) {
  const std::vector<Agent> agents = agents_of(seq);
  std::set<std::string> atoms;
  for (auto& a : atoms_of(seq)) atoms.insert(a);
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& rule : assumptions) {
      if (std::find(agents.begin(), agents.end(), rule.agent) == agents.end()) continue;
      if (atoms.count(rule.trigger) == 0) continue;
      for (auto& a : atoms_of(rule.consequent)) grew = atoms.insert(a).second || grew;
    }
  }
  return {atoms.begin(), atoms.end()};
}

std::optional<Countermodel> find_countermodel(const Sequent& seq, const CountermodelBounds& bounds,
                                              const Assumptions& assumptions) {
  const std::vector<Agent> agents = agents_of(seq);
  const std::vector<std::string> atoms = relevant_atoms(seq, assumptions);
  if (agents.size() > bounds.max_agents || atoms.size() > bounds.max_atoms) return std::nullopt;
  if (bounds.max_worlds > kMaxWorlds) throw SemanticsError("world bound exceeds enumeration limit");

  SequentProgram prog(seq, atoms, agents);
  struct Constraint {
    Program lhs;
    Program rhs;
  };
  std::vector<Constraint> constraints;
  for (const auto& rule : assumptions) {
    if (std::find(agents.begin(), agents.end(), rule.agent) == agents.end()) continue;
    if (std::find(atoms.begin(), atoms.end(), rule.trigger) == atoms.end()) continue;
    Constraint c;
    compile(Formula::dia(rule.agent, Formula::atom(rule.trigger)), atoms, agents, c.lhs);
    compile(rule.consequent, atoms, agents, c.rhs);
    constraints.push_back(std::move(c));
  }

  for (int n = 1; n <= bounds.max_worlds; ++n) {
    for (const KripkeFrame& frame : frames_by_count(n, agents.size())) {
      if (bounds.cancel != nullptr && bounds.cancel->load()) return std::nullopt;
      std::optional<Countermodel> found;
      for_each_tuple(downsets(n, frame.down), atoms.size(), [&](const std::vector<WorldSet>& val) {
        const WorldSet bad = prog.failures(frame, val);
        if (bad == 0) return true;
        for (auto& c : constraints) {
          const WorldSet l = prog.eval(c.lhs, frame, val);
          if ((l & ~prog.eval(c.rhs, frame, val)) != 0) return true;
        }
        Countermodel m{KripkeStructure{frame, {}}, std::countr_zero(bad)};
        m.structure.frame.agents = agents;
        for (std::size_t i = 0; i < atoms.size(); ++i) m.structure.valuation[atoms[i]] = val[i];
        found = std::move(m);
        return false;
      });
      if (found) return found;
    }
  }
  return std::nullopt;
}

std::string countermodel_to_json(const Countermodel& m, int indent) {
  using nlohmann::json;
  const KripkeFrame& f = m.structure.frame;
  json doc;
  doc["worlds"] = f.worlds;
  json order = json::array();
  for (int v = 0; v < f.worlds; ++v)
    for (int w = 0; w < f.worlds; ++w)
      if (v != w && f.leq(v, w)) order.push_back({v, w});
  doc["order"] = std::move(order);
  json rel = json::object();
  for (std::size_t a = 0; a < f.agents.size(); ++a) {
    json pairs = json::array();
    for (int w = 0; w < f.worlds; ++w)
      for (int v = 0; v < f.worlds; ++v)
        if ((f.succ[a][w] >> v & 1U) != 0) pairs.push_back({w, v});
    rel[f.agents[a].name] = std::move(pairs);
  }
  doc["relations"] = std::move(rel);
  json val = json::object();
  for (const auto& [atom, set] : m.structure.valuation) {
    json worlds = json::array();
    for (int w = 0; w < f.worlds; ++w)
      if ((set >> w & 1U) != 0) worlds.push_back(w);
    val[atom] = std::move(worlds);
  }
  doc["valuation"] = std::move(val);
  doc["witness"] = m.world;
  return doc.dump(indent);
}

std::string countermodel_to_text(const Countermodel& m) {
  const KripkeFrame& f = m.structure.frame;
  std::ostringstream os;
  os << "worlds:";
  for (int w = 0; w < f.worlds; ++w) os << " w" << w;
  os << "\norder:";
  bool any = false;
  for (int v = 0; v < f.worlds; ++v)
    for (int w = 0; w < f.worlds; ++w)
      if (v != w && f.leq(v, w)) {
        os << " w" << v << "<=w" << w;
        any = true;
      }
  if (!any) os << " discrete";
  for (std::size_t a = 0; a < f.agents.size(); ++a) {
    os << "\nR_" << f.agents[a].name << ":";
    for (int w = 0; w < f.worlds; ++w)
      for (int v = 0; v < f.worlds; ++v)
        if ((f.succ[a][w] >> v & 1U) != 0) os << " w" << w << "->w" << v;
  }
  for (const auto& [atom, set] : m.structure.valuation) {
    os << "\n" << atom << ":";
    for (int w = 0; w < f.worlds; ++w)
      if ((set >> w & 1U) != 0) os << " w" << w;
  }
  os << "\nwitness: w" << m.world << "\n";
  return os.str();
}

int FiniteDLAM::agent_index(const Agent& a) const {
  auto it = std::find(agents.begin(), agents.end(), a);
  return it == agents.end() ? -1 : static_cast<int>(it - agents.begin());
}

FiniteDLAM make_dlam(std::vector<std::vector<bool>> leq, std::vector<Agent> agents,
                     std::vector<std::vector<int>> dia, std::vector<std::vector<int>> box) {
  FiniteDLAM d;
  d.size = static_cast<int>(leq.size());
  d.leq = std::move(leq);
  d.agents = std::move(agents);
  d.dia = std::move(dia);
  d.box = std::move(box);
  const int n = d.size;
  auto bound = [&](int a, int b, bool lower) {
    std::vector<int> cands;
    for (int c = 0; c < n; ++c) {
      if (lower ? (d.leq[c][a] && d.leq[c][b]) : (d.leq[a][c] && d.leq[b][c])) cands.push_back(c);
    }
    for (int g : cands) {
      const bool best = std::all_of(cands.begin(), cands.end(),
                                    [&](int c) { return lower ? bool(d.leq[c][g]) : bool(d.leq[g][c]); });
      if (best) return g;
    }
    return -1;
  };
  d.meet.assign(n, std::vector<int>(n, -1));
  d.join.assign(n, std::vector<int>(n, -1));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      d.meet[a][b] = bound(a, b, true);
      d.join[a][b] = bound(a, b, false);
    }
  for (int c = 0; c < n; ++c) {
    bool is_bottom = true;
    bool is_top = true;
    for (int x = 0; x < n; ++x) {
      is_bottom = is_bottom && d.leq[c][x];
      is_top = is_top && d.leq[x][c];
    }
    if (is_bottom) d.bottom = c;
    if (is_top) d.top = c;
  }
  return d;
}

FiniteDLAM complex_algebra(const KripkeFrame& frame) {
  if (auto v = frame_violations(frame); !v.empty()) throw SemanticsError("invalid frame: " + v.front());
  const int n = frame.worlds;
  std::vector<WorldSet> elems = downsets(n, frame.down);
  const int m = static_cast<int>(elems.size());
  auto index_of = [&](WorldSet s) {
    auto it = std::find(elems.begin(), elems.end(), s);
    if (it == elems.end()) throw SemanticsError("modal image is not a down-set");
    return static_cast<int>(it - elems.begin());
  };
  std::vector<std::vector<bool>> leq(m, std::vector<bool>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) leq[a][b] = (elems[a] & ~elems[b]) == 0;
  std::vector<std::vector<int>> dia(frame.agents.size(), std::vector<int>(m));
  std::vector<std::vector<int>> box(frame.agents.size(), std::vector<int>(m));
  for (std::size_t ag = 0; ag < frame.agents.size(); ++ag) {
    const auto& succ = frame.succ[ag];
    for (int e = 0; e < m; ++e) {
      WorldSet d = 0;
      WorldSet b = 0;
      for (int w = 0; w < n; ++w) {
        if ((elems[e] >> w & 1U) != 0) d |= succ[w];
        if ((succ[w] & ~elems[e]) == 0) b |= bit(w);
      }
      dia[ag][e] = index_of(d);
      box[ag][e] = index_of(b);
    }
  }
  FiniteDLAM out = make_dlam(std::move(leq), frame.agents, std::move(dia), std::move(box));
  out.downsets = std::move(elems);
  return out;
}

bool DlamReport::violates(const std::string& law) const {
  return std::any_of(violations.begin(), violations.end(), [&](const LawViolation& v) { return v.law == law; });
}

const std::vector<std::string>& dlam_laws() {
  static const std::vector<std::string> laws = {
      "partial-order", "meet",      "join",      "bounds",    "distributivity", "dia-monotone",
      "box-monotone",  "adjunction", "dia-joins", "box-meets", "dia-meets",      "box-joins",
      "dia-bot",       "box-top",   "counit",    "unit"};
  return laws;
}

DlamReport dlam_validate(const FiniteDLAM& d) {
  DlamReport report;
  const int n = d.size;
  auto fail = [&](const std::string& law, const std::string& witness) {
    report.violations.push_back(LawViolation{law, witness});
  };
  auto w2 = [](const std::string& agent, int a, int b) {
    return (agent.empty() ? "" : "agent " + agent + " ") + "a=" + std::to_string(a) + " b=" + std::to_string(b);
  };
  if (static_cast<int>(d.leq.size()) != n) {
    fail("partial-order", "order table has wrong size");
    return report;
  }
  for (int a = 0; a < n; ++a) {
    if (!d.leq[a][a]) fail("partial-order", w2("", a, a));
    for (int b = 0; b < n; ++b) {
      if (a != b && d.leq[a][b] && d.leq[b][a]) fail("partial-order", w2("", a, b));
      for (int c = 0; c < n; ++c) {
        if (d.leq[a][b] && d.leq[b][c] && !d.leq[a][c]) fail("partial-order", w2("", a, c));
      }
    }
  }
  bool lattice = report.ok();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (d.meet.size() != static_cast<std::size_t>(n) || d.meet[a][b] < 0) {
        fail("meet", w2("", a, b));
        lattice = false;
      }
      if (d.join.size() != static_cast<std::size_t>(n) || d.join[a][b] < 0) {
        fail("join", w2("", a, b));
        lattice = false;
      }
    }
  if (d.bottom < 0 || d.top < 0) {
    fail("bounds", "no least or greatest element");
    lattice = false;
  }
  if (!lattice) return report;
  const auto& M = d.meet;
  const auto& J = d.join;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (M[a][J[b][c]] != J[M[a][b]][M[a][c]]) fail("distributivity", w2("", a, b) + " c=" + std::to_string(c));
      }
  if (d.dia.size() != d.agents.size() || d.box.size() != d.agents.size()) {
    fail("adjunction", "modal tables do not match the agent list");
    return report;
  }
  for (std::size_t ag = 0; ag < d.agents.size(); ++ag) {
    const std::string name = d.agents[ag].name;
    const auto& D = d.dia[ag];
    const auto& B = d.box[ag];
    if (static_cast<int>(D.size()) != n || static_cast<int>(B.size()) != n) {
      fail("adjunction", "agent " + name + " table has wrong size");
      continue;
    }
    auto le = [&](int x, int y) { return bool(d.leq[x][y]); };
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (le(a, b) && !le(D[a], D[b])) fail("dia-monotone", w2(name, a, b));
        if (le(a, b) && !le(B[a], B[b])) fail("box-monotone", w2(name, a, b));
        if (le(D[a], b) != le(a, B[b])) fail("adjunction", w2(name, a, b));
      }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (D[J[a][b]] != J[D[a]][D[b]]) fail("dia-joins", w2(name, a, b));
        if (B[M[a][b]] != M[B[a]][B[b]]) fail("box-meets", w2(name, a, b));
        if (!le(D[M[a][b]], M[D[a]][D[b]])) fail("dia-meets", w2(name, a, b));
        if (!le(J[B[a]][B[b]], B[J[a][b]])) fail("box-joins", w2(name, a, b));
      }
    if (D[d.bottom] != d.bottom) fail("dia-bot", "agent " + name);
    if (B[d.top] != d.top) fail("box-top", "agent " + name);
    for (int a = 0; a < n; ++a) {
      if (!le(D[B[a]], a)) fail("counit", w2(name, a, a));
      if (!le(a, B[D[a]])) fail("unit", w2(name, a, a));
    }
  }
  return report;
}

int interpret(const FiniteDLAM& d, const Interpretation& interp, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Bot:
      return d.bottom;
    case FormulaKind::Top:
      return d.top;
    case FormulaKind::Atom: {
      auto it = interp.find(f.name());
      if (it == interp.end()) throw SemanticsError("no interpretation for atom " + f.name());
      return it->second;
    }
    case FormulaKind::And:
      return d.meet[interpret(d, interp, f.left())][interpret(d, interp, f.right())];
    case FormulaKind::Or:
      return d.join[interpret(d, interp, f.left())][interpret(d, interp, f.right())];
    case FormulaKind::Dia:
    case FormulaKind::Box: {
      const int ag = d.agent_index(f.agent());
      if (ag < 0) throw SemanticsError("algebra has no modality for agent " + f.agent().name);
      const int x = interpret(d, interp, f.body());
      return f.is(FormulaKind::Dia) ? d.dia[ag][x] : d.box[ag][x];
    }
  }
  return d.bottom;
}

int interpret(const FiniteDLAM& d, const Interpretation& interp, const Context& ctx) {
  int acc = d.top;
  for (const auto& item : ctx.items) {
    int v = 0;
    if (item.is_formula()) {
      v = interpret(d, interp, item.formula());
    } else {
      const int ag = d.agent_index(item.agent());
      if (ag < 0) throw SemanticsError("algebra has no modality for agent " + item.agent().name);
      v = d.dia[ag][interpret(d, interp, item.context())];
    }
    acc = d.meet[acc][v];
  }
  return acc;
}

bool sequent_true_dlam(const FiniteDLAM& d, const Interpretation& interp, const Sequent& seq) {
  return d.leq[interpret(d, interp, seq.antecedent)][interpret(d, interp, seq.succedent)];
}

Interpretation induced_interpretation(const KripkeStructure& s, const FiniteDLAM& algebra) {
  Interpretation out;
  for (const auto& [atom, set] : s.valuation) {
    auto it = std::find(algebra.downsets.begin(), algebra.downsets.end(), set);
    if (it == algebra.downsets.end()) throw SemanticsError("valuation of " + atom + " is not an element");
    out[atom] = static_cast<int>(it - algebra.downsets.begin());
  }
  return out;
}

}  // namespace apml
