// SPDX-License-Identifier: Apache-2.0
//
// clauth: cross-layer authentication simulator for vehicular networks.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef CLAUTH_BAN_HPP
#define CLAUTH_BAN_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace clauth::ban {

enum class Kind {
  Atom,
  Var,
  Believes,       // P |= F
  Sees,           // P <| F
  Said,           // P |~ F
  Controls,       // P ==> F
  SharedKey,      // P <-k-> Q
  PublicKey,      // k is P's public key
  Encrypted,      // {F}_k
  EncryptedPriv,  // {F}_{k^-1} (signed)
  Fresh,          // #(F)
  Conj,           // (F, G), right-nested for longer tuples
};

struct Formula;
using FPtr = std::shared_ptr<const Formula>;

struct Formula {
  Kind kind;
  std::string name;        // Atom / Var only
  std::vector<FPtr> args;  // children, arity fixed per kind
};

FPtr atom(std::string name);
FPtr var(std::string name);
FPtr believes(FPtr p, FPtr f);
FPtr sees(FPtr p, FPtr f);
FPtr said(FPtr p, FPtr f);
FPtr controls(FPtr p, FPtr f);
FPtr shared_key(FPtr p, FPtr k, FPtr q);
FPtr public_key(FPtr p, FPtr k);
FPtr encrypted(FPtr f, FPtr k);
FPtr encrypted_priv(FPtr f, FPtr k);
FPtr fresh(FPtr f);
FPtr conj(FPtr a, FPtr b);
FPtr tuple(const std::vector<FPtr>& parts);  // right-nested conjunction

bool equal(const FPtr& a, const FPtr& b);
std::string to_string(const FPtr& f);

// Most-general matching of a variable-bearing pattern against a formula;
// binding a variable to a term containing that variable fails (occurs
// check).
using Binding = std::map<std::string, FPtr>;
std::optional<Binding> unify(const FPtr& pattern, const FPtr& formula);
bool unify_into(const FPtr& pattern, const FPtr& formula, Binding& binding);
FPtr substitute(const FPtr& pattern, const Binding& binding);

enum class RuleKind {
  Pattern,        // plain premise/conclusion patterns
  Freshness,      // R5: fresh part -> fresh whole, over seen message bodies
  DiffieHellman,  // believed peer public key -> believed shared key
};

struct InferenceRule {
  std::string name;
  RuleKind kind = RuleKind::Pattern;
  std::vector<FPtr> premises;
  FPtr conclusion;
};

// R1-R5, the certificate rule (A6/A7 premise/conclusion form) and the
// structural seeing rules.
std::vector<InferenceRule> standard_rules();

// Shared-key naming for the Diffie-Hellman rule: "dh K : P Q".
struct DhDecl {
  std::string key;
  std::string p1;
  std::string p2;
};

struct Model {
  std::vector<std::string> principals;
  std::vector<std::pair<std::string, FPtr>> axioms;
  std::vector<std::pair<std::string, FPtr>> messages;
  std::vector<std::pair<std::string, FPtr>> goals;
  std::vector<DhDecl> dh;

  void drop_axiom(const std::string& name);
};

// Line-oriented model text; throws std::invalid_argument with line numbers.
Model parse_model(const std::string& text);

// All formulas newly derivable from `known` by one application of `rule`.
std::vector<FPtr> apply_rule(const InferenceRule& rule, const std::vector<FPtr>& known,
                             const std::vector<DhDecl>& dh = {});

struct Step {
  FPtr formula;
  std::string rule;                   // "axiom", "message" or rule name
  std::vector<std::size_t> premises;  // indices of earlier steps
};

struct Derivation {
  std::vector<Step> steps;
  bool success = false;
  std::vector<std::string> achieved_goals;
  std::vector<std::string> missing_goals;
};

// Forward chaining to fixpoint (capped at max_formulas); succeeds iff every
// goal is derived.
Derivation derive(const Model& model, const std::vector<InferenceRule>& rules,
                  std::size_t max_formulas = 10000);

// Soundness replay: re-validates every step against its rule.
bool validate(const Derivation& derivation, const std::vector<InferenceRule>& rules,
              const std::vector<DhDecl>& dh);

std::string derivation_to_text(const Model& model, const Derivation& derivation);

}  // namespace clauth::ban

#endif
