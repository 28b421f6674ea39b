// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "ban.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace clauth::ban {

static FPtr make(Kind k, std::string name, std::vector<FPtr> args) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->name = std::move(name);
  f->args = std::move(args);
  return f;
}

FPtr atom(std::string name) { return make(Kind::Atom, std::move(name), {}); }
FPtr var(std::string name) { return make(Kind::Var, std::move(name), {}); }
FPtr believes(FPtr p, FPtr f) { return make(Kind::Believes, "", {std::move(p), std::move(f)}); }
FPtr sees(FPtr p, FPtr f) { return make(Kind::Sees, "", {std::move(p), std::move(f)}); }
FPtr said(FPtr p, FPtr f) { return make(Kind::Said, "", {std::move(p), std::move(f)}); }
FPtr controls(FPtr p, FPtr f) { return make(Kind::Controls, "", {std::move(p), std::move(f)}); }
FPtr shared_key(FPtr p, FPtr k, FPtr q) {
  return make(Kind::SharedKey, "", {std::move(p), std::move(k), std::move(q)});
}
FPtr public_key(FPtr p, FPtr k) { return make(Kind::PublicKey, "", {std::move(p), std::move(k)}); }
FPtr encrypted(FPtr f, FPtr k) { return make(Kind::Encrypted, "", {std::move(f), std::move(k)}); }
FPtr encrypted_priv(FPtr f, FPtr k) {
  return make(Kind::EncryptedPriv, "", {std::move(f), std::move(k)});
}
FPtr fresh(FPtr f) { return make(Kind::Fresh, "", {std::move(f)}); }
FPtr conj(FPtr a, FPtr b) { return make(Kind::Conj, "", {std::move(a), std::move(b)}); }

FPtr tuple(const std::vector<FPtr>& parts) {
  if (parts.empty()) throw std::invalid_argument("empty tuple");
  FPtr out = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) out = conj(parts[i], out);
  return out;
}

bool equal(const FPtr& a, const FPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->name != b->name || a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

std::string to_string(const FPtr& f) {
  switch (f->kind) {
    case Kind::Atom: return f->name;
    case Kind::Var: return "?" + f->name;
    case Kind::Believes: return to_string(f->args[0]) + " believes " + to_string(f->args[1]);
    case Kind::Sees: return to_string(f->args[0]) + " sees " + to_string(f->args[1]);
    case Kind::Said: return to_string(f->args[0]) + " said " + to_string(f->args[1]);
    case Kind::Controls:
      return "controls(" + to_string(f->args[0]) + ", " + to_string(f->args[1]) + ")";
    case Kind::SharedKey:
      return "sharedkey(" + to_string(f->args[0]) + ", " + to_string(f->args[1]) + ", " +
             to_string(f->args[2]) + ")";
    case Kind::PublicKey:
      return "publickey(" + to_string(f->args[0]) + ", " + to_string(f->args[1]) + ")";
    case Kind::Encrypted:
      return "enc(" + to_string(f->args[0]) + ", " + to_string(f->args[1]) + ")";
    case Kind::EncryptedPriv:
      return "signed(" + to_string(f->args[0]) + ", " + to_string(f->args[1]) + ")";
    case Kind::Fresh: return "fresh(" + to_string(f->args[0]) + ")";
    case Kind::Conj: {
      // flatten right-nested conjunctions back into a tuple
      std::string out = "(" + to_string(f->args[0]);
      FPtr rest = f->args[1];
      while (rest->kind == Kind::Conj) {
        out += ", " + to_string(rest->args[0]);
        rest = rest->args[1];
      }
      out += ", " + to_string(rest) + ")";
      return out;
    }
  }
  return "?";
}

static bool contains_var(const FPtr& f, const std::string& name) {
  if (f->kind == Kind::Var && f->name == name) return true;
  for (const auto& a : f->args)
    if (contains_var(a, name)) return true;
  return false;
}

bool unify_into(const FPtr& pattern, const FPtr& formula, Binding& binding) {
  if (pattern->kind == Kind::Var) {
    auto it = binding.find(pattern->name);
    if (it != binding.end()) return equal(it->second, formula);
    if (contains_var(formula, pattern->name)) return false;  // occurs check
    binding[pattern->name] = formula;
    return true;
  }
  if (pattern->kind != formula->kind || pattern->name != formula->name ||
      pattern->args.size() != formula->args.size())
    return false;
  for (std::size_t i = 0; i < pattern->args.size(); ++i)
    if (!unify_into(pattern->args[i], formula->args[i], binding)) return false;
  return true;
}

std::optional<Binding> unify(const FPtr& pattern, const FPtr& formula) {
  Binding b;
  if (unify_into(pattern, formula, b)) return b;
  return std::nullopt;
}

FPtr substitute(const FPtr& pattern, const Binding& binding) {
  if (pattern->kind == Kind::Var) {
    auto it = binding.find(pattern->name);
    if (it == binding.end()) throw std::invalid_argument("unbound variable " + pattern->name);
    return it->second;
  }
  if (pattern->args.empty()) return pattern;
  std::vector<FPtr> args;
  args.reserve(pattern->args.size());
  for (const auto& a : pattern->args) args.push_back(substitute(a, binding));
  return make(pattern->kind, pattern->name, std::move(args));
}

std::vector<InferenceRule> standard_rules() {
  std::vector<InferenceRule> rules;
  const FPtr A = var("A"), B = var("B"), S = var("S");
  const FPtr X = var("X"), Y = var("Y"), K = var("K"), K2 = var("K2");

  rules.push_back({"R1", RuleKind::Pattern,
                   {believes(A, shared_key(A, K, B)), sees(A, encrypted(X, K))},
                   believes(A, said(B, X))});
  rules.push_back({"R2", RuleKind::Pattern,
                   {believes(A, public_key(B, K)), sees(A, encrypted_priv(X, K))},
                   believes(A, said(B, X))});
  rules.push_back({"R3", RuleKind::Pattern,
                   {believes(A, fresh(X)), believes(A, said(B, X))},
                   believes(A, believes(B, X))});
  rules.push_back({"R4", RuleKind::Pattern,
                   {believes(A, controls(B, X)), believes(A, believes(B, X))},
                   believes(A, X)});
  rules.push_back({"R5", RuleKind::Freshness, {}, nullptr});
  // Certificate rule (A6/A7 shape): a believed signer key plus a seen
  // certificate yields belief in the certified key.
  rules.push_back({"CERT", RuleKind::Pattern,
                   {believes(A, public_key(S, K)),
                    sees(A, encrypted_priv(conj(public_key(B, K2), Y), K))},
                   believes(A, public_key(B, K2))});
  // Key agreement: believing the peer's public key yields belief in the
  // declared Diffie-Hellman shared key.
  rules.push_back({"DH", RuleKind::DiffieHellman, {}, nullptr});
  // Structural seeing rules: signatures do not hide content, tuples split.
  rules.push_back({"SEE-SIGNED", RuleKind::Pattern, {sees(A, encrypted_priv(X, K))}, sees(A, X)});
  rules.push_back({"SEE-FST", RuleKind::Pattern, {sees(A, conj(X, Y))}, sees(A, X)});
  rules.push_back({"SEE-SND", RuleKind::Pattern, {sees(A, conj(X, Y))}, sees(A, Y)});
  return rules;
}

namespace {

// X is a component of F when F == X or X appears in F's conjunction tree.
bool component_of(const FPtr& x, const FPtr& f) {
  if (equal(x, f)) return true;
  if (f->kind == Kind::Conj)
    return component_of(x, f->args[0]) || component_of(x, f->args[1]);
  return false;
}

// Message bodies available for freshness promotion: payloads of seen or
// said encrypted/signed terms.
void collect_bodies(const FPtr& f, std::vector<FPtr>& out) {
  if (f->kind == Kind::Encrypted || f->kind == Kind::EncryptedPriv) out.push_back(f->args[0]);
  if (f->kind == Kind::Said) out.push_back(f->args[1]);
  for (const auto& a : f->args) collect_bodies(a, out);
}

struct Conclusion {
  FPtr formula;
  std::vector<std::size_t> premises;
};

void match_premises(const InferenceRule& rule, const std::vector<FPtr>& known, std::size_t at,
                    Binding binding, std::vector<std::size_t> used,
                    std::vector<Conclusion>& out) {
  if (at == rule.premises.size()) {
    out.push_back({substitute(rule.conclusion, binding), std::move(used)});
    return;
  }
  for (std::size_t i = 0; i < known.size(); ++i) {
    Binding next = binding;
    if (!unify_into(rule.premises[at], known[i], next)) continue;
    auto used_next = used;
    used_next.push_back(i);
    match_premises(rule, known, at + 1, std::move(next), std::move(used_next), out);
  }
}

std::vector<Conclusion> conclusions_of(const InferenceRule& rule, const std::vector<FPtr>& known,
                                       const std::vector<DhDecl>& dh) {
  std::vector<Conclusion> out;
  switch (rule.kind) {
    case RuleKind::Pattern:
      match_premises(rule, known, 0, {}, {}, out);
      break;
    case RuleKind::Freshness: {
      std::vector<FPtr> bodies;
      for (const auto& f : known) collect_bodies(f, bodies);
      for (std::size_t i = 0; i < known.size(); ++i) {
        const FPtr& f = known[i];
        if (f->kind != Kind::Believes || f->args[1]->kind != Kind::Fresh) continue;
        const FPtr& principal = f->args[0];
        const FPtr& part = f->args[1]->args[0];
        for (const auto& body : bodies) {
          if (equal(body, part) || !component_of(part, body)) continue;
          out.push_back({believes(principal, fresh(body)), {i}});
        }
      }
      break;
    }
    case RuleKind::DiffieHellman: {
      for (std::size_t i = 0; i < known.size(); ++i) {
        const FPtr& f = known[i];
        if (f->kind != Kind::Believes || f->args[1]->kind != Kind::PublicKey) continue;
        const FPtr& owner = f->args[0];
        const FPtr& peer = f->args[1]->args[0];
        if (owner->kind != Kind::Atom || peer->kind != Kind::Atom) continue;
        for (const auto& d : dh) {
          const bool fwd = owner->name == d.p1 && peer->name == d.p2;
          const bool rev = owner->name == d.p2 && peer->name == d.p1;
          if (!fwd && !rev) continue;
          out.push_back({believes(owner, shared_key(owner, atom(d.key), peer)), {i}});
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<FPtr> apply_rule(const InferenceRule& rule, const std::vector<FPtr>& known,
                             const std::vector<DhDecl>& dh) {
  std::set<std::string> have;
  for (const auto& f : known) have.insert(to_string(f));
  std::vector<FPtr> fresh_formulas;
  for (const auto& c : conclusions_of(rule, known, dh)) {
    const std::string key = to_string(c.formula);
    if (have.insert(key).second) fresh_formulas.push_back(c.formula);
  }
  return fresh_formulas;
}

Derivation derive(const Model& model, const std::vector<InferenceRule>& rules,
                  std::size_t max_formulas) {
  Derivation d;
  std::set<std::string> have;
  std::vector<FPtr> known;
  auto add = [&](const FPtr& f, const std::string& rule, std::vector<std::size_t> prem) {
    const std::string key = to_string(f);
    if (!have.insert(key).second) return false;
    known.push_back(f);
    d.steps.push_back({f, rule, std::move(prem)});
    return true;
  };
  for (const auto& [name, f] : model.axioms) add(f, "axiom " + name, {});
  for (const auto& [name, f] : model.messages) add(f, "message " + name, {});

  bool changed = true;
  while (changed && known.size() < max_formulas) {
    changed = false;
    for (const auto& rule : rules) {
      for (const auto& c : conclusions_of(rule, known, model.dh)) {
        if (known.size() >= max_formulas) break;
        if (add(c.formula, rule.name, c.premises)) changed = true;
      }
    }
  }

  d.success = true;
  for (const auto& [name, goal] : model.goals) {
    const bool ok = std::any_of(known.begin(), known.end(),
                                [&](const FPtr& f) { return equal(f, goal); });
    if (ok)
      d.achieved_goals.push_back(name);
    else {
      d.missing_goals.push_back(name);
      d.success = false;
    }
  }
  return d;
}

bool validate(const Derivation& derivation, const std::vector<InferenceRule>& rules,
              const std::vector<DhDecl>& dh) {
  for (std::size_t i = 0; i < derivation.steps.size(); ++i) {
    const Step& step = derivation.steps[i];
    if (step.rule.rfind("axiom", 0) == 0 || step.rule.rfind("message", 0) == 0) continue;
    const auto rule_it = std::find_if(rules.begin(), rules.end(), [&](const InferenceRule& r) {
      return r.name == step.rule;
    });
    if (rule_it == rules.end()) return false;
    // replay against exactly the recorded premise steps
    std::vector<FPtr> premise_formulas;
    for (std::size_t p : step.premises) {
      if (p >= i) return false;  // must reference earlier steps
      premise_formulas.push_back(derivation.steps[p].formula);
    }
    bool ok = false;
    for (const auto& c : conclusions_of(*rule_it, premise_formulas, dh))
      if (equal(c.formula, step.formula)) ok = true;
    if (!ok && rule_it->kind == RuleKind::Freshness) {
      // freshness bodies may come from anywhere earlier in the derivation
      std::vector<FPtr> ctx;
      for (std::size_t p = 0; p < i; ++p) ctx.push_back(derivation.steps[p].formula);
      for (const auto& c : conclusions_of(*rule_it, ctx, dh))
        if (equal(c.formula, step.formula)) ok = true;
    }
    if (!ok) return false;
  }
  return true;
}

void Model::drop_axiom(const std::string& name) {
  axioms.erase(std::remove_if(axioms.begin(), axioms.end(),
                              [&](const auto& kv) { return kv.first == name; }),
               axioms.end());
}

// --- parser -----------------------------------------------------------------

namespace {

struct Tokens {
  std::vector<std::string> toks;
  std::size_t pos = 0;
  const std::string& peek() const {
    static const std::string empty;
    return pos < toks.size() ? toks[pos] : empty;
  }
  std::string next() {
    if (pos >= toks.size()) throw std::invalid_argument("unexpected end of formula");
    return toks[pos++];
  }
  void expect(const std::string& t) {
    const std::string got = next();
    if (got != t) throw std::invalid_argument("expected '" + t + "', got '" + got + "'");
  }
  bool done() const { return pos >= toks.size(); }
};

Tokens tokenize(const std::string& s) {
  Tokens t;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(' || c == ')' || c == ',') {
      t.toks.push_back(std::string(1, c));
      ++i;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      t.toks.push_back(s.substr(i, j - i));
      i = j;
    } else {
      throw std::invalid_argument(std::string("unexpected character '") + c + "'");
    }
  }
  return t;
}

FPtr parse_formula(Tokens& t);

FPtr parse_args2(Tokens& t, const std::function<FPtr(FPtr, FPtr)>& build) {
  t.expect("(");
  FPtr a = parse_formula(t);
  t.expect(",");
  FPtr b = parse_formula(t);
  t.expect(")");
  return build(a, b);
}

FPtr parse_formula(Tokens& t) {
  const std::string tok = t.next();
  if (tok == "(") {
    std::vector<FPtr> parts;
    parts.push_back(parse_formula(t));
    while (t.peek() == ",") {
      t.expect(",");
      parts.push_back(parse_formula(t));
    }
    t.expect(")");
    return parts.size() == 1 ? parts[0] : tuple(parts);
  }
  if (tok == "fresh") {
    t.expect("(");
    FPtr f = parse_formula(t);
    t.expect(")");
    return fresh(f);
  }
  if (tok == "controls") return parse_args2(t, [](FPtr a, FPtr b) { return controls(a, b); });
  if (tok == "publickey") return parse_args2(t, [](FPtr a, FPtr b) { return public_key(a, b); });
  if (tok == "enc") return parse_args2(t, [](FPtr a, FPtr b) { return encrypted(a, b); });
  if (tok == "signed")
    return parse_args2(t, [](FPtr a, FPtr b) { return encrypted_priv(a, b); });
  if (tok == "sharedkey") {
    t.expect("(");
    FPtr a = parse_formula(t);
    t.expect(",");
    FPtr k = parse_formula(t);
    t.expect(",");
    FPtr b = parse_formula(t);
    t.expect(")");
    return shared_key(a, k, b);
  }
  // identifier: either an atom or "<principal> believes|sees|said <formula>"
  const std::string& nxt = t.peek();
  if (nxt == "believes") {
    t.next();
    return believes(atom(tok), parse_formula(t));
  }
  if (nxt == "sees") {
    t.next();
    return sees(atom(tok), parse_formula(t));
  }
  if (nxt == "said") {
    t.next();
    return said(atom(tok), parse_formula(t));
  }
  return atom(tok);
}

FPtr parse_formula_text(const std::string& text) {
  Tokens t = tokenize(text);
  FPtr f = parse_formula(t);
  if (!t.done()) throw std::invalid_argument("trailing tokens after formula");
  return f;
}

}  // namespace

Model parse_model(const std::string& text) {
  Model model;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    try {
      if (word == "principals") {
        std::string p;
        while (ls >> p) model.principals.push_back(p);
      } else if (word == "dh") {
        std::string key, colon, p1, p2;
        if (!(ls >> key >> colon >> p1 >> p2) || colon != ":")
          throw std::invalid_argument("expected: dh <key> : <P> <Q>");
        model.dh.push_back({key, p1, p2});
      } else if (word == "axiom" || word == "message" || word == "goal") {
        std::string name;
        if (!(ls >> name)) throw std::invalid_argument("missing name");
        if (!name.empty() && name.back() == ':') name.pop_back();
        std::string rest;
        std::getline(ls, rest);
        const auto colon = rest.find(':');
        if (colon != std::string::npos && name.find(':') == std::string::npos)
          rest.erase(0, colon + 1);
        const FPtr f = parse_formula_text(rest);
        if (word == "axiom") model.axioms.emplace_back(name, f);
        else if (word == "message") model.messages.emplace_back(name, f);
        else model.goals.emplace_back(name, f);
      } else {
        throw std::invalid_argument("unknown directive '" + word + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("ban model line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return model;
}

std::string derivation_to_text(const Model& model, const Derivation& d) {
  std::ostringstream out;
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const Step& s = d.steps[i];
    out << "[" << i << "] " << to_string(s.formula) << "    (" << s.rule;
    for (std::size_t p : s.premises) out << " " << p;
    out << ")\n";
  }
  out << "\n";
  for (const auto& [name, goal] : model.goals) {
    const bool ok = std::find(d.achieved_goals.begin(), d.achieved_goals.end(), name) !=
                    d.achieved_goals.end();
    out << (ok ? "derived " : "MISSING ") << name << ": " << to_string(goal) << "\n";
  }
  out << d.achieved_goals.size() << "/" << model.goals.size() << " goals derived\n";
  return out.str();
}

}  // namespace clauth::ban
