#ifndef CONTDIAG_ORDINAL_HPP
#define CONTDIAG_ORDINAL_HPP

#include <functional>
#include <memory>
#include <string>

#include "contdiag/errors.hpp"

namespace contdiag {

struct OrdinalNode;
using Ordinal = std::shared_ptr<const OrdinalNode>;

/// Ordinal notation: zero, successor, or a limit given by a strictly
/// increasing generator sequence.  Limits are identified by a generator id
/// so notations can be compared and serialized; order below a limit is
/// probe-limited (semi-decided along the generator).
struct OrdinalNode {
  enum class Kind { Zero, Succ, Lim };
  Kind kind = Kind::Zero;
  Ordinal pred;                                 // Succ
  std::string generator_id;                     // Lim
  std::function<Ordinal(unsigned)> generator;   // Lim
};

inline Ordinal ord_zero() {
  static const Ordinal z = std::make_shared<OrdinalNode>();
  return z;
}

inline Ordinal ord_succ(Ordinal o) {
  auto n = std::make_shared<OrdinalNode>();
  n->kind = OrdinalNode::Kind::Succ;
  n->pred = std::move(o);
  return n;
}

inline Ordinal ord_lim(std::string id, std::function<Ordinal(unsigned)> gen) {
  auto n = std::make_shared<OrdinalNode>();
  n->kind = OrdinalNode::Kind::Lim;
  n->generator_id = std::move(id);
  n->generator = std::move(gen);
  return n;
}

inline Ordinal ord_finite(unsigned k) {
  Ordinal o = ord_zero();
  for (unsigned i = 0; i < k; ++i) o = ord_succ(o);
  return o;
}

inline bool ordinal_equal(const Ordinal& a, const Ordinal& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case OrdinalNode::Kind::Zero:
      return true;
    case OrdinalNode::Kind::Succ:
      return ordinal_equal(a->pred, b->pred);
    case OrdinalNode::Kind::Lim:
      return a->generator_id == b->generator_id;
  }
  return false;
}

/// a < b along the notation system.  Below a limit the generator is probed
/// at the first `probe` indices; a miss reports false, so the relation is
/// sound but only semi-decided past the probe horizon.
inline bool ordinal_less(const Ordinal& a, const Ordinal& b, unsigned probe = 64) {
  switch (b->kind) {
    case OrdinalNode::Kind::Zero:
      return false;
    case OrdinalNode::Kind::Succ:
      return ordinal_equal(a, b->pred) || ordinal_less(a, b->pred, probe);
    case OrdinalNode::Kind::Lim:
      for (unsigned i = 0; i < probe; ++i) {
        Ordinal g = b->generator(i);
        if (ordinal_equal(a, g) || ordinal_less(a, g, probe)) return true;
      }
      return false;
  }
  return false;
}

inline bool ordinal_is_limit(const Ordinal& a) {
  return a->kind == OrdinalNode::Kind::Lim;
}

/// Finite value of a notation; throws on limits.
inline unsigned ordinal_finite_value(const Ordinal& a) {
  unsigned v = 0;
  const OrdinalNode* cur = a.get();
  while (cur->kind == OrdinalNode::Kind::Succ) {
    ++v;
    cur = cur->pred.get();
  }
  if (cur->kind != OrdinalNode::Kind::Zero)
    throw DomainError("ordinal_finite_value: notation passes through a limit");
  return v;
}

inline std::string ordinal_to_string(const Ordinal& a) {
  switch (a->kind) {
    case OrdinalNode::Kind::Zero:
      return "0";
    case OrdinalNode::Kind::Succ: {
      // Compress finite tails.
      const OrdinalNode* cur = a.get();
      unsigned steps = 0;
      while (cur->kind == OrdinalNode::Kind::Succ) {
        ++steps;
        cur = cur->pred.get();
      }
      if (cur->kind == OrdinalNode::Kind::Zero) return std::to_string(steps);
      return "lim(" + cur->generator_id + ")+" + std::to_string(steps);
    }
    case OrdinalNode::Kind::Lim:
      return "lim(" + a->generator_id + ")";
  }
  return "?";
}

}  // namespace contdiag

#endif
