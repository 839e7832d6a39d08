#include "apml/scenarios.hpp"

#include <bit>
#include <deque>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace apml {

std::string round_name(const MuddyRound& r) {
  switch (r.kind) {
    case MuddyRound::BeforeFather:
      return "before_father";
    case MuddyRound::AfterFather:
      return "after_father";
    case MuddyRound::AfterRound:
      return "after_round(" + std::to_string(r.round) + ")";
  }
  return "unknown";
}

MuddyRound parse_round(std::string_view text) {
  if (text == "before_father") return {MuddyRound::BeforeFather, 0};
  if (text == "after_father") return {MuddyRound::AfterFather, 0};
  constexpr std::string_view prefix = "after_round(";
  if (text.substr(0, prefix.size()) == prefix && text.size() > prefix.size() + 1 && text.back() == ')') {
    const std::string digits(text.substr(prefix.size(), text.size() - prefix.size() - 1));
    if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos && digits.size() < 4) {
      return {MuddyRound::AfterRound, std::stoi(digits)};
    }
  }
  throw std::invalid_argument("unknown round: " + std::string(text));
}

void validate(const MuddyConfig& c) {
  if (c.n < 1 || c.n > kMaxChildren) {
    throw std::invalid_argument("number of children must be between 1 and " + std::to_string(kMaxChildren));
  }
  if (c.variant == MuddyVariant::Liar) {
    if (c.k != 0) throw std::invalid_argument("the liar variant has no muddy children (k = 0)");
    if (c.round.kind == MuddyRound::AfterRound) {
      throw std::invalid_argument("the liar variant stops after the father's announcement");
    }
    return;
  }
  if (c.k < 1 || c.k > c.n) throw std::invalid_argument("muddy count k must satisfy 1 <= k <= n");
  if (c.round.kind == MuddyRound::AfterRound && (c.round.round < 1 || c.round.round > c.k - 1)) {
    throw std::invalid_argument("round must satisfy 1 <= r <= k-1");
  }
}

std::vector<MuddyConfig> all_configs(int max_n) {
  std::vector<MuddyConfig> out;
  for (int n = 1; n <= max_n; ++n) {
    for (int k = 1; k <= n; ++k) {
      out.push_back({n, k, {MuddyRound::BeforeFather, 0}, MuddyVariant::Honest});
      out.push_back({n, k, {MuddyRound::AfterFather, 0}, MuddyVariant::Honest});
      for (int r = 1; r <= k - 1; ++r) out.push_back({n, k, {MuddyRound::AfterRound, r}, MuddyVariant::Honest});
    }
  }
  for (int n = 1; n <= max_n; ++n) {
    out.push_back({n, 0, {MuddyRound::BeforeFather, 0}, MuddyVariant::Liar});
    out.push_back({n, 0, {MuddyRound::AfterFather, 0}, MuddyVariant::Liar});
  }
  return out;
}

MuddyConfig muddy_config_from_json(std::string_view text) {
  using nlohmann::json;
  MuddyConfig c;
  try {
    const json j = json::parse(text);
    c.n = j.at("n").get<int>();
    const std::string variant = j.value("variant", std::string("honest"));
    if (variant == "honest") {
      c.variant = MuddyVariant::Honest;
    } else if (variant == "liar") {
      c.variant = MuddyVariant::Liar;
    } else {
      throw std::invalid_argument("variant must be \"honest\" or \"liar\"");
    }
    c.k = j.value("k", c.variant == MuddyVariant::Liar ? 0 : c.n);
    c.round = parse_round(j.value("round", std::string("before_father")));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed scenario config: ") + e.what());
  }
  validate(c);
  return c;
}

std::string muddy_config_to_json(const MuddyConfig& c) {
  nlohmann::json j{{"n", c.n},
                   {"k", c.k},
                   {"round", round_name(c.round)},
                   {"variant", c.variant == MuddyVariant::Honest ? "honest" : "liar"}};
  return j.dump(2);
}

std::string describe(const MuddyConfig& c) {
  return std::string(c.variant == MuddyVariant::Honest ? "honest" : "liar") + " n=" + std::to_string(c.n) +
         " k=" + std::to_string(c.k) + " " + round_name(c.round);
}

std::string state_atom(const std::vector<int>& children) {
  std::set<int> sorted(children.begin(), children.end());
  std::string out = "s{";
  bool first = true;
  for (int i : sorted) {
    if (!first) out += ",";
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

std::string state_atom(unsigned mask) {
  std::vector<int> children;
  for (int i = 0; i < 32; ++i) {
    if ((mask >> i & 1U) != 0) children.push_back(i + 1);
  }
  return state_atom(children);
}

Agent child(int i) { return Agent(std::to_string(i)); }

bool eliminated(unsigned state, const MuddyRound& round) {
  const int size = std::popcount(state);
  switch (round.kind) {
    case MuddyRound::BeforeFather:
      return false;
    case MuddyRound::AfterFather:
      return size == 0;
    case MuddyRound::AfterRound:
      return size <= round.round;
  }
  return false;
}

namespace {

unsigned true_state(const MuddyConfig& c) { return (1U << c.k) - 1U; }

Formula state(unsigned mask) { return Formula::atom(state_atom(mask)); }

Formula disjunction(const std::vector<unsigned>& states) {
  Formula acc = state(states.back());
  for (std::size_t i = states.size() - 1; i-- > 0;) acc = Formula::disj(state(states[i]), acc);
  return acc;
}

}  // namespace

Assumptions build_assumptions(const MuddyConfig& config) {
  validate(config);
  Assumptions out;
  std::set<unsigned> seen{true_state(config)};
  std::deque<unsigned> queue{true_state(config)};
  while (!queue.empty()) {
    const unsigned beta = queue.front();
    queue.pop_front();
    for (int i = 1; i <= config.n; ++i) {
      std::vector<unsigned> possible;
      for (unsigned s : {beta, beta ^ (1U << (i - 1))}) {
        if (!eliminated(s, config.round)) possible.push_back(s);
      }
      if (possible.empty()) continue;
      out.push_back(AssumptionRule{child(i), state_atom(beta), disjunction(possible)});
      for (unsigned s : possible) {
        if (seen.insert(s).second) queue.push_back(s);
      }
    }
  }
  return out;
}

std::vector<MuddyQuery> build_queries(const MuddyConfig& config) {
  validate(config);
  std::vector<MuddyQuery> out;
  const unsigned truth = true_state(config);
  const Formula s = state(truth);
  auto ant = [&] { return singleton(s); };
  auto box = [](int i, Formula f) { return Formula::box(child(i), std::move(f)); };

  if (config.variant == MuddyVariant::Liar) {
    for (int i = 1; i <= config.n; ++i) {
      const Formula own = state(1U << (i - 1));
      if (config.round.kind == MuddyRound::BeforeFather) {
        out.push_back({"liar uncertainty " + std::to_string(i), Sequent{ant(), box(i, Formula::disj(s, own))}, true});
        out.push_back({"liar control " + std::to_string(i), Sequent{ant(), box(i, own)}, false});
      } else {
        out.push_back({"liar belief " + std::to_string(i), Sequent{ant(), box(i, own)}, true});
      }
    }
    return out;
  }

  const int k = config.k;
  const bool muddy_know = (k == 1 && config.round.kind != MuddyRound::BeforeFather) ||
                          (config.round.kind == MuddyRound::AfterRound && config.round.round >= k - 1);
  for (int i = 1; i <= k; ++i) {
    const std::string tag = std::to_string(i);
    const Formula other = state(truth & ~(1U << (i - 1)));
    out.push_back({"muddy uncertainty " + tag, Sequent{ant(), box(i, Formula::disj(s, other))}, true});
    if (muddy_know) {
      Formula goal = box(i, s);
      if (k >= 2) {
        const int j = i % k + 1;
        goal = Formula::conj(goal, box(i, box(j, s)));
      }
      out.push_back({"muddy knowledge " + tag, Sequent{ant(), goal}, true});
    } else {
      out.push_back({"muddy control " + tag, Sequent{ant(), box(i, s)}, false});
    }
  }
  for (int w = k + 1; w <= config.n; ++w) {
    const std::string tag = std::to_string(w);
    const Formula with = state(truth | (1U << (w - 1)));
    out.push_back({"clean uncertainty " + tag, Sequent{ant(), box(w, Formula::disj(s, with))}, true});
    out.push_back({"clean control " + tag, Sequent{ant(), box(w, s)}, false});
  }
  return out;
}

}  // namespace apml
