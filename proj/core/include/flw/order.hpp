// Order machinery underpinning termination and the saturation engine:
// scattered-subword embedding, the sequent embedding (equal succedent +
// antecedent subword), norms, the reflection into succedent-indexed words,
// minimal-element antichains, and controlled-trace checking.
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "flw/sequent.hpp"

namespace flw {

// Greedy scattered-subword test: w1 embeds into w2 keeping order.
template <class T, class Eq = std::equal_to<T>>
bool subword_embed(std::span<const T> w1, std::span<const T> w2, Eq eq = {}) {
  std::size_t i = 0;
  for (std::size_t j = 0; i < w1.size() && j < w2.size(); ++j)
    if (eq(w1[i], w2[j])) ++i;
  return i == w1.size();
}

// A fixed finite alphabet with a canonical enumeration; formula ids are
// 1-based positions in that enumeration (0 is reserved for "no succedent").
struct SequentOrder {
  std::vector<Formula> phi;
  std::unordered_map<Formula, std::size_t, FormulaHash> ids;

  explicit SequentOrder(std::vector<Formula> alphabet);

  std::size_t id_of(const Formula& f) const; // throws NotInAlphabet
  bool contains(const Formula& f) const { return ids.count(f) != 0; }
  bool is_phi_sequent(const Sequent& s) const;
};

// s1 embeds into s2: equal succedents and antecedent subword embedding.
bool seq_embed(const Sequent& s1, const Sequent& s2);

// Antecedent length; the quantity all saturation bounds speak about.
inline std::size_t norm(const Sequent& s) { return s.antecedent.size(); }

// Reflects a sequent into (succedent index, antecedent word); index 0 means
// an empty succedent. Throws NotInAlphabet for formulas outside phi. Two
// sequents embed iff their reflections share the index and the words embed.
std::pair<std::size_t, std::vector<Formula>> reflection_map(const SequentOrder& ord,
                                                            const Sequent& s);

template <class T>
struct InsertOutcome {
  bool inserted = false;
  std::optional<T> subsumed_by; // set when rejected
  std::vector<T> removed;       // strictly larger elements evicted
};

// Set of minimal elements under a quasi-order le(a,b) = "a below-or-equal b".
// Flat vector with linear scans; adequate for desk-scale frontiers.
template <class T, class Le>
class Antichain {
public:
  explicit Antichain(Le le = {}) : le_(std::move(le)) {}

  const std::vector<T>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }

  bool covers(const T& x) const {
    for (const T& e : elems_)
      if (le_(e, x)) return true;
    return false;
  }

  InsertOutcome<T> insert(T x) {
    InsertOutcome<T> out;
    for (const T& e : elems_) {
      if (le_(e, x)) {
        out.subsumed_by = e;
        return out;
      }
    }
    std::size_t keep = 0;
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      if (le_(x, elems_[i])) {
        out.removed.push_back(std::move(elems_[i]));
      } else {
        if (keep != i) elems_[keep] = std::move(elems_[i]);
        ++keep;
      }
    }
    elems_.resize(keep);
    elems_.push_back(std::move(x));
    out.inserted = true;
    return out;
  }

private:
  std::vector<T> elems_;
  Le le_;
};

struct SeqEmbedLe {
  bool operator()(const Sequent& a, const Sequent& b) const { return seq_embed(a, b); }
};
using SequentAntichain = Antichain<Sequent, SeqEmbedLe>;

// A norm trace controlled by (g, n): entry i must stay below g applied i
// times to n. g must saturate instead of overflowing.
struct ControlledTrace {
  std::vector<std::uint64_t> norms;
  std::function<std::uint64_t(std::uint64_t)> g;
  std::uint64_t n = 0;
};

bool control_check(const ControlledTrace& tr);

constexpr std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

} // namespace flw
