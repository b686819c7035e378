#ifndef CONTDIAG_SIGNATURE_HPP
#define CONTDIAG_SIGNATURE_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "contdiag/errors.hpp"

namespace contdiag {

/// Modulus of uniform continuity, k -> Delta(k).
using Modulus = std::function<unsigned(unsigned)>;

inline Modulus constant_modulus(unsigned v) {
  return [v](unsigned) { return v; };
}
inline Modulus identity_modulus() {
  return [](unsigned k) { return k; };
}

struct PredicateSymbol {
  std::string name;
  unsigned arity = 0;
  Modulus modulus = constant_modulus(1);
};

struct FunctionSymbol {
  std::string name;
  unsigned arity = 0;
  Modulus modulus = constant_modulus(1);
};

/// A metric signature.  The metric symbol d is implicit and binary.
///
/// Besides explicitly listed symbols, a signature may carry pattern
/// recognizers for infinite symbol families (the built-in structures have
/// countably many constants and predicates; only finitely many are ever
/// touched in a run, but any of them must parse).
class Signature {
 public:
  void add_predicate(PredicateSymbol p) {
    require_fresh(p.name);
    predicates_.emplace(p.name, std::move(p));
  }
  void add_function(FunctionSymbol f) {
    require_fresh(f.name);
    functions_.emplace(f.name, std::move(f));
  }
  void add_constant(const std::string& name) {
    require_fresh(name);
    constants_.insert(name);
  }

  /// Recognizer for a family of constants, e.g. "p<i>" or "c<n>".
  /// Returns the arity-0 acceptance of the name.
  void add_constant_pattern(std::function<bool(const std::string&)> pattern) {
    constant_patterns_.push_back(std::move(pattern));
  }
  /// Recognizer for a predicate family; returns arity when the name matches.
  void add_predicate_pattern(
      std::function<std::optional<unsigned>(const std::string&)> pattern,
      Modulus modulus = constant_modulus(1)) {
    predicate_patterns_.emplace_back(std::move(pattern), std::move(modulus));
  }

  bool is_constant(const std::string& name) const {
    if (constants_.count(name)) return true;
    for (const auto& p : constant_patterns_)
      if (p(name)) return true;
    return false;
  }
  std::optional<unsigned> predicate_arity(const std::string& name) const {
    if (auto it = predicates_.find(name); it != predicates_.end())
      return it->second.arity;
    for (const auto& [pat, mod] : predicate_patterns_)
      if (auto a = pat(name)) return a;
    return std::nullopt;
  }
  std::optional<unsigned> function_arity(const std::string& name) const {
    if (auto it = functions_.find(name); it != functions_.end())
      return it->second.arity;
    return std::nullopt;
  }
  Modulus predicate_modulus(const std::string& name) const {
    if (auto it = predicates_.find(name); it != predicates_.end())
      return it->second.modulus;
    for (const auto& [pat, mod] : predicate_patterns_)
      if (pat(name)) return mod;
    throw DomainError("unknown predicate symbol: " + name);
  }

 private:
  void require_fresh(const std::string& name) const {
    if (constants_.count(name) || predicates_.count(name) ||
        functions_.count(name))
      throw DomainError("duplicate symbol name: " + name);
  }

  std::map<std::string, PredicateSymbol> predicates_;
  std::map<std::string, FunctionSymbol> functions_;
  std::set<std::string> constants_;
  std::vector<std::function<bool(const std::string&)>> constant_patterns_;
  std::vector<std::pair<std::function<std::optional<unsigned>(const std::string&)>, Modulus>>
      predicate_patterns_;
};

}  // namespace contdiag

#endif
