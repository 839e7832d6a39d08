#include "apml/derivation_io.hpp"

#include "json.hpp"

#include "apml/parse.hpp"
#include "apml/print.hpp"

namespace apml {

namespace {

using nlohmann::json;

bool has_position(RuleKind k) {
  return k != RuleKind::TopR && k != RuleKind::AndR && k != RuleKind::OrR1 && k != RuleKind::OrR2 &&
         k != RuleKind::BoxR;
}

json encode(const Derivation& raw) {
  const Derivation d = realign(raw, canonical(raw->conclusion.antecedent));
  json node;
  node["rule"] = std::string(rule_name(d->rule.kind));
  node["conclusion"] = to_string(d->conclusion);
  if (has_position(d->rule.kind)) {
    node["principal"] = {{"level", d->rule.principal.level.steps}, {"index", d->rule.principal.index}};
  }
  if (d->rule.kind == RuleKind::BoxL || d->rule.kind == RuleKind::Assn) node["inner"] = d->rule.inner;
  if (d->rule.assumption) node["assumption"] = d->rule.assumption->to_line();
  json prem = json::array();
  for (const auto& p : d->premisses) prem.push_back(encode(p));
  node["premisses"] = std::move(prem);
  return node;
}

Derivation decode(const json& node) {
  if (!node.is_object()) throw SyntaxError("derivation node must be an object", 0);
  RuleApp app;
  std::string conclusion_text;
  try {
    conclusion_text = node.at("conclusion").get<std::string>();
    app.kind = rule_from_name(node.at("rule").get<std::string>());
    if (node.contains("principal")) {
      const json& pr = node.at("principal");
      app.principal.level = Path(pr.at("level").get<std::vector<std::size_t>>());
      app.principal.index = pr.at("index").get<std::size_t>();
    }
    if (node.contains("inner")) app.inner = node.at("inner").get<std::size_t>();
    if (node.contains("assumption")) {
      app.assumption = parse_assumption(node.at("assumption").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw SyntaxError(std::string("malformed derivation node: ") + e.what(), 0);
  } catch (const std::invalid_argument& e) {
    throw SyntaxError(e.what(), 0);
  }
  Sequent conclusion = parse_sequent(conclusion_text);
  std::vector<Derivation> premisses;
  if (node.contains("premisses")) {
    if (!node.at("premisses").is_array()) throw SyntaxError("premisses must be an array", 0);
    for (const auto& p : node.at("premisses")) premisses.push_back(decode(p));
  }
  return make_derivation(std::move(conclusion), std::move(app), std::move(premisses));
}

void render(const Derivation& d, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += rule_name(d->rule.kind);
  if (d->rule.assumption) out += " [" + d->rule.assumption->to_line() + "]";
  out += "  ";
  out += to_string(d->conclusion);
  out += '\n';
  for (const auto& p : d->premisses) render(p, depth + 1, out);
}

}  // namespace

std::string derivation_to_json(const Derivation& d, int indent) { return encode(d).dump(indent); }

Derivation derivation_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SyntaxError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  return decode(doc);
}

std::string derivation_to_text(const Derivation& d) {
  std::string out;
  render(d, 0, out);
  return out;
}

}  // namespace apml
