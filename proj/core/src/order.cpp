#include "flw/order.hpp"

#include <algorithm>

namespace flw {

SequentOrder::SequentOrder(std::vector<Formula> alphabet) : phi(std::move(alphabet)) {
  std::sort(phi.begin(), phi.end(), Formula::canonical_less);
  phi.erase(std::unique(phi.begin(), phi.end(),
                        [](const Formula& a, const Formula& b) { return a == b; }),
            phi.end());
  for (std::size_t i = 0; i < phi.size(); ++i) ids.emplace(phi[i], i + 1);
}

std::size_t SequentOrder::id_of(const Formula& f) const {
  auto it = ids.find(f);
  if (it == ids.end())
    throw NotInAlphabet("formula outside the alphabet: " + f.to_string());
  return it->second;
}

bool SequentOrder::is_phi_sequent(const Sequent& s) const {
  for (const Formula& f : s.antecedent)
    if (!contains(f)) return false;
  return !s.succedent || contains(*s.succedent);
}

bool seq_embed(const Sequent& s1, const Sequent& s2) {
  if (s1.succedent.has_value() != s2.succedent.has_value()) return false;
  if (s1.succedent && !(*s1.succedent == *s2.succedent)) return false;
  return subword_embed<Formula>(s1.antecedent, s2.antecedent);
}

std::pair<std::size_t, std::vector<Formula>> reflection_map(const SequentOrder& ord,
                                                            const Sequent& s) {
  std::size_t idx = 0;
  if (s.succedent) idx = ord.id_of(*s.succedent);
  for (const Formula& f : s.antecedent) ord.id_of(f); // alphabet check
  return {idx, s.antecedent};
}

bool control_check(const ControlledTrace& tr) {
  std::uint64_t bound = tr.n;
  for (std::size_t i = 0; i < tr.norms.size(); ++i) {
    if (tr.norms[i] >= bound) return false;
    bound = tr.g(bound);
  }
  return true;
}

} // namespace flw
