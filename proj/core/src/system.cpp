// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "gapslice/system.hpp"

#include <sstream>

#include "gapslice/util/hash.hpp"

namespace gapslice {

std::optional<uint32_t> TransitionSystem::var_index(const std::string& n) const {
  for (uint32_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == n) return i;
  return std::nullopt;
}

std::optional<uint32_t> TransitionSystem::sort_index(const std::string& n) const {
  for (uint32_t i = 0; i < sorts.size(); ++i)
    if (sorts[i] == n) return i;
  return std::nullopt;
}

const ConstDecl* TransitionSystem::const_decl(const std::string& n) const {
  for (const auto& c : consts)
    if (c.name == n) return &c;
  return nullptr;
}

std::optional<uint32_t> TransitionSystem::action_index(const std::string& n) const {
  for (uint32_t i = 0; i < actions.size(); ++i)
    if (actions[i].name == n) return i;
  return std::nullopt;
}

const LemmaDecl* TransitionSystem::lemma(const std::string& n) const {
  for (const auto& l : lemmas)
    if (l.name == n) return &l;
  return nullptr;
}

std::string TransitionSystem::pretty() const {
  std::ostringstream out;
  out << "protocol " << name << "\n\n";
  for (const auto& s : sorts) out << "sort " << s << "\n";
  for (const auto& c : consts) out << "const " << c.name << " : " << c.type.to_string() << "\n";
  for (const auto& v : vars) out << "var " << v.name << " : " << v.type.to_string() << "\n";
  out << "\ninit {\n";
  for (const auto& cl : inits) {
    out << "  " << vars[cl.var].name << (cl.choice ? " in " : " = ")
        << expr_to_string(cl.expr) << ";\n";
  }
  out << "}\n";
  for (const auto& a : actions) {
    out << "\naction " << a.name << "(";
    for (size_t i = 0; i < a.params.size(); ++i) {
      if (i) out << ", ";
      out << a.params[i].name << " : " << a.params[i].domain;
    }
    out << ") {\n";
    if (a.require) out << "  require " << expr_to_string(a.require) << ";\n";
    for (const auto& [var, rhs] : a.updates)
      out << "  " << vars[var].name << "' = " << expr_to_string(rhs) << ";\n";
    out << "}\n";
  }
  if (!lemmas.empty()) out << "\n";
  for (const auto& l : lemmas)
    out << "lemma " << l.name << " = " << expr_to_string(l.body) << "\n";
  return out.str();
}

uint64_t TransitionSystem::content_hash() const { return fnv1a64(pretty()); }

}  // namespace gapslice
