#include "oracles.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "apml/print.hpp"

#ifndef APML_CORPUS_FILE
#error "APML_CORPUS_FILE must point at the regression corpus"
#endif

namespace apml::oracle {

std::vector<CorpusEntry> regression_corpus() {
  std::ifstream in(APML_CORPUS_FILE);
  if (!in) throw std::runtime_error("cannot open " + std::string(APML_CORPUS_FILE));
  std::vector<CorpusEntry> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    const auto bar = line.find('|');
    if (bar == std::string::npos) continue;
    std::string tag = line.substr(0, bar);
    tag.erase(std::remove(tag.begin(), tag.end(), ' '), tag.end());
    if (tag != "provable" && tag != "unprovable") throw std::runtime_error("bad corpus tag on line " + std::to_string(number));
    out.push_back({tag == "provable", line.substr(bar + 1), number});
  }
  return out;
}

std::size_t formula_size(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Bot:
    case FormulaKind::Top:
    case FormulaKind::Atom:
      return 0;
    case FormulaKind::And:
    case FormulaKind::Or:
      return 1 + formula_size(f.left()) + formula_size(f.right());
    case FormulaKind::Dia:
    case FormulaKind::Box:
      return 2 + formula_size(f.body());
  }
  return 0;
}

namespace {

bool rel(const KripkeStructure& s, const Agent& a, int from, int to) {
  for (std::size_t i = 0; i < s.frame.agents.size(); ++i) {
    if (s.frame.agents[i] == a) return (s.frame.succ[i][from] >> to & 1U) != 0;
  }
  return false;
}

bool in(WorldSet set, int w) { return (set >> w & 1U) != 0; }

}  // namespace

WorldSet worlds_of(const KripkeStructure& s, const Formula& f) {
  const int n = s.frame.worlds;
  const WorldSet all = (WorldSet{1} << n) - 1;
  switch (f.kind()) {
    case FormulaKind::Bot:
      return 0;
    case FormulaKind::Top:
      return all;
    case FormulaKind::Atom:
      return s.valuation.at(f.name());
    case FormulaKind::And:
      return worlds_of(s, f.left()) & worlds_of(s, f.right());
    case FormulaKind::Or:
      return worlds_of(s, f.left()) | worlds_of(s, f.right());
    case FormulaKind::Dia: {
      const WorldSet body = worlds_of(s, f.body());
      WorldSet out = 0;
      for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v)
          if (in(body, v) && rel(s, f.agent(), v, w)) out |= WorldSet{1} << w;
      return out;
    }
    case FormulaKind::Box: {
      const WorldSet body = worlds_of(s, f.body());
      WorldSet out = 0;
      for (int w = 0; w < n; ++w) {
        bool all_ok = true;
        for (int v = 0; v < n; ++v)
          if (rel(s, f.agent(), w, v) && !in(body, v)) all_ok = false;
        if (all_ok) out |= WorldSet{1} << w;
      }
      return out;
    }
  }
  return 0;
}

WorldSet worlds_of(const KripkeStructure& s, const Context& ctx) {
  const int n = s.frame.worlds;
  WorldSet acc = (WorldSet{1} << n) - 1;
  for (const Item& item : ctx.items) {
    if (item.is_formula()) {
      acc &= worlds_of(s, item.formula());
      continue;
    }
    const WorldSet inner = worlds_of(s, item.context());
    WorldSet out = 0;
    for (int w = 0; w < n; ++w)
      for (int v = 0; v < n; ++v)
        if (in(inner, v) && rel(s, item.agent(), v, w)) out |= WorldSet{1} << w;
    acc &= out;
  }
  return acc;
}

bool holds(const KripkeStructure& s, const Sequent& seq) {
  return (worlds_of(s, seq.antecedent) & ~worlds_of(s, seq.succedent)) == 0;
}

bool same_multiset(const Context& a, const Context& b) {
  if (a.items.size() != b.items.size()) return false;
  std::vector<std::size_t> perm(b.items.size());
  std::iota(perm.begin(), perm.end(), 0);
  auto item_equal = [](const Item& x, const Item& y) {
    if (x.is_formula() != y.is_formula()) return false;
    if (x.is_formula()) return x.formula() == y.formula();
    return x.agent() == y.agent() && same_multiset(x.context(), y.context());
  };
  do {
    bool ok = true;
    for (std::size_t i = 0; i < perm.size() && ok; ++i) ok = item_equal(a.items[i], b.items[perm[i]]);
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::vector<KripkeStructure> labeled_structures(int n, const std::vector<Agent>& agents,
                                                const std::vector<std::string>& atoms) {
  auto le = [](std::uint32_t order, int n_, int v, int w) { return v == w || (order >> (v * n_ + w) & 1U) != 0; };
  std::vector<std::uint32_t> orders;
  for (std::uint32_t order = 0; order < (1U << (n * n)); ++order) {
    bool ok = true;
    for (int v = 0; v < n; ++v)
      if ((order >> (v * n + v) & 1U) != 0) ok = false;
    for (int u = 0; u < n && ok; ++u)
      for (int v = 0; v < n && ok; ++v) {
        if (u != v && le(order, n, u, v) && le(order, n, v, u)) ok = false;
        for (int w = 0; w < n && ok; ++w)
          if (le(order, n, u, v) && le(order, n, v, w) && !le(order, n, u, w)) ok = false;
      }
    if (ok) orders.push_back(order);
  }

  std::vector<KripkeStructure> out;
  for (std::uint32_t order : orders) {
    KripkeFrame frame;
    frame.worlds = n;
    frame.down.assign(n, 0);
    for (int w = 0; w < n; ++w)
      for (int v = 0; v < n; ++v)
        if (le(order, n, v, w)) frame.down[w] |= WorldSet{1} << v;
    frame.agents = agents;

    std::vector<std::vector<WorldSet>> relations;
    for (std::uint32_t bits = 0; bits < (1U << (n * n)); ++bits) {
      auto r = [&](int x, int y) { return (bits >> (x * n + y) & 1U) != 0; };
      bool ok = true;
      for (int z = 0; z < n && ok; ++z)
        for (int y = 0; y < n && ok; ++y) {
          if (!r(z, y)) continue;
          for (int u = 0; u < n && ok; ++u)
            for (int y2 = 0; y2 < n && ok; ++y2)
              if (le(order, n, z, u) && le(order, n, y2, y) && !r(u, y2)) ok = false;
        }
      if (!ok) continue;
      std::vector<WorldSet> succ(n, 0);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (r(x, y)) succ[x] |= WorldSet{1} << y;
      relations.push_back(std::move(succ));
    }

    std::vector<WorldSet> down_sets;
    for (WorldSet z = 0; z < (WorldSet{1} << n); ++z) {
      bool ok = true;
      for (int w = 0; w < n; ++w)
        for (int v = 0; v < n; ++v)
          if (in(z, w) && le(order, n, v, w) && !in(z, v)) ok = false;
      if (ok) down_sets.push_back(z);
    }

    std::function<void(std::size_t)> pick_relations;
    std::function<void(std::size_t)> pick_values;
    KripkeStructure current{frame, {}};
    pick_values = [&](std::size_t i) {
      if (i == atoms.size()) {
        out.push_back(current);
        return;
      }
      for (WorldSet z : down_sets) {
        current.valuation[atoms[i]] = z;
        pick_values(i + 1);
      }
    };
    pick_relations = [&](std::size_t a) {
      if (a == agents.size()) {
        pick_values(0);
        return;
      }
      for (const auto& succ : relations) {
        current.frame.succ.push_back(succ);
        pick_relations(a + 1);
        current.frame.succ.pop_back();
      }
    };
    pick_relations(0);
  }
  return out;
}

}  // namespace apml::oracle
