#include "lopt/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace lopt {

ModeLayout::ModeLayout(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxModes) {
    throw Error("layout has " + std::to_string(names_.size()) + " modes, limit is " +
                std::to_string(kMaxModes));
  }
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty()) throw Error("empty mode name");
    if (!seen.insert(n).second) throw Error("duplicate mode name '" + n + "'");
  }
}

std::optional<std::size_t> ModeLayout::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::size_t ModeLayout::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error("unknown mode '" + std::string(name) + "'");
}

ModeLayout ModeLayout::concat(const ModeLayout& other) const {
  std::vector<std::string> all = names_;
  all.insert(all.end(), other.names_.begin(), other.names_.end());
  return ModeLayout(std::move(all));
}

unsigned Occupation::total() const {
  return std::accumulate(n.begin(), n.end(), 0u);
}

std::size_t OccupationHash::operator()(const Occupation& o) const noexcept {
  // FNV-1a over the packed counts.
  std::uint64_t h = 1469598103934665603ull;
  for (auto c : o.n) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

Occupation make_occupation(const ModeLayout& layout,
                           std::initializer_list<std::pair<std::string_view, unsigned>> counts) {
  Occupation occ;
  for (const auto& [name, k] : counts) occ[layout.index(name)] += static_cast<std::uint8_t>(k);
  return occ;
}

Occupation make_occupation(std::initializer_list<unsigned> counts) {
  if (counts.size() > kMaxModes) throw Error("occupation longer than mode limit");
  Occupation occ;
  std::size_t i = 0;
  for (unsigned k : counts) occ[i++] = static_cast<std::uint8_t>(k);
  return occ;
}

std::vector<unsigned> to_vector(const Occupation& occ, std::size_t modes) {
  return std::vector<unsigned>(occ.n.begin(), occ.n.begin() + static_cast<std::ptrdiff_t>(modes));
}

SparseState::SparseState(ModeLayout layout, unsigned n_max)
    : layout_(std::move(layout)), n_max_(n_max) {}

Amplitude SparseState::amplitude(const Occupation& occ) const {
  auto it = terms_.find(occ);
  return it == terms_.end() ? Amplitude{} : it->second;
}

void SparseState::add(const Occupation& occ, Amplitude amp) {
  if (occ.total() > n_max_) return;
  terms_[occ] += amp;
}

void SparseState::prune(double threshold) {
  std::erase_if(terms_, [threshold](const auto& kv) { return std::abs(kv.second) < threshold; });
}

double SparseState::norm_squared() const {
  double sum = 0.0;
  for (const auto& [occ, amp] : terms_) sum += std::norm(amp);
  return sum;
}

double SparseState::norm() const { return std::sqrt(norm_squared()); }

std::vector<std::pair<Occupation, Amplitude>> SparseState::sorted_terms() const {
  std::vector<std::pair<Occupation, Amplitude>> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

SparseState vacuum(const ModeLayout& layout, unsigned n_max) {
  SparseState s(layout, n_max);
  s.add(Occupation{}, 1.0);
  return s;
}

SparseState basis_state(const ModeLayout& layout, const Occupation& occ, unsigned n_max) {
  for (std::size_t i = layout.size(); i < kMaxModes; ++i) {
    if (occ[i] != 0) throw Error("occupation references a mode outside the layout");
  }
  if (occ.total() > n_max) throw Error("basis state exceeds the truncation bound");
  SparseState s(layout, n_max);
  s.add(occ, 1.0);
  return s;
}

SparseState apply_monomial(const SparseState& state, const Occupation& powers, Amplitude coeff) {
  const std::size_t m = state.layout().size();
  for (std::size_t i = m; i < kMaxModes; ++i) {
    if (powers[i] != 0) throw Error("monomial references a mode outside the layout");
  }
  SparseState out(state.layout(), state.n_max());
  const unsigned added = powers.total();
  for (const auto& [occ, amp] : state.terms()) {
    if (occ.total() + added > state.n_max()) continue;
    Occupation next = occ;
    double factor = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (unsigned k = 1; k <= powers[i]; ++k) factor *= std::sqrt(double(occ[i] + k));
      next[i] = static_cast<std::uint8_t>(occ[i] + powers[i]);
    }
    out.add(next, coeff * factor * amp);
  }
  out.prune();
  return out;
}

namespace {

void require_same_layout(const SparseState& a, const SparseState& b) {
  if (!(a.layout() == b.layout())) throw Error("layout mismatch between states");
}

}  // namespace

Amplitude inner_product(const SparseState& bra, const SparseState& ket) {
  require_same_layout(bra, ket);
  const auto& small = bra.size() <= ket.size() ? bra : ket;
  const auto& large = bra.size() <= ket.size() ? ket : bra;
  Amplitude sum{};
  for (const auto& [occ, amp] : small.terms()) {
    auto it = large.terms().find(occ);
    if (it == large.terms().end()) continue;
    sum += (&small == &bra) ? std::conj(amp) * it->second : std::conj(it->second) * amp;
  }
  return sum;
}

SparseState normalize(const SparseState& state) {
  const double n = state.norm();
  if (n == 0.0) throw Error("state annihilated");
  return scale(state, 1.0 / n);
}

SparseState truncate(const SparseState& state, unsigned n_max) {
  SparseState out(state.layout(), n_max);
  for (const auto& [occ, amp] : state.terms()) out.add(occ, amp);
  return out;
}

SparseState scale(const SparseState& state, Amplitude c) {
  SparseState out(state.layout(), state.n_max());
  for (const auto& [occ, amp] : state.terms()) out.add(occ, c * amp);
  out.prune();
  return out;
}

SparseState add_scaled(const SparseState& s1, const SparseState& s2, Amplitude c) {
  require_same_layout(s1, s2);
  SparseState out(s1.layout(), std::min(s1.n_max(), s2.n_max()));
  for (const auto& [occ, amp] : s1.terms()) out.add(occ, amp);
  for (const auto& [occ, amp] : s2.terms()) out.add(occ, c * amp);
  out.prune();
  return out;
}

SparseState tensor(const SparseState& s1, const SparseState& s2) {
  ModeLayout layout = s1.layout().concat(s2.layout());
  const std::size_t offset = s1.layout().size();
  SparseState out(layout, std::max(s1.n_max(), s2.n_max()));
  for (const auto& [o1, a1] : s1.terms()) {
    for (const auto& [o2, a2] : s2.terms()) {
      Occupation occ = o1;
      for (std::size_t i = 0; i < s2.layout().size(); ++i) occ[offset + i] = o2[i];
      out.add(occ, a1 * a2);
    }
  }
  out.prune();
  return out;
}

SparseState embed(const SparseState& state, const ModeLayout& target) {
  const auto& src = state.layout();
  std::vector<std::size_t> map(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto j = target.find(src.name(i));
    if (!j) throw Error("mode '" + src.name(i) + "' missing from target layout");
    map[i] = *j;
  }
  SparseState out(target, state.n_max());
  for (const auto& [occ, amp] : state.terms()) {
    Occupation next;
    for (std::size_t i = 0; i < src.size(); ++i) next[map[i]] = occ[i];
    out.add(next, amp);
  }
  return out;
}

SparseState photon_sector(const SparseState& state, unsigned n) {
  SparseState out(state.layout(), state.n_max());
  for (const auto& [occ, amp] : state.terms()) {
    if (occ.total() == n) out.add(occ, amp);
  }
  return out;
}

double fidelity(const SparseState& a, const SparseState& b) {
  const double na = a.norm_squared();
  const double nb = b.norm_squared();
  if (na == 0.0 || nb == 0.0) throw Error("state annihilated");
  return std::norm(inner_product(a, b)) / (na * nb);
}

nlohmann::json to_json(const SparseState& state) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [occ, amp] : state.sorted_terms()) {
    out.push_back({{"occupation", to_vector(occ, state.layout().size())},
                   {"re", amp.real()},
                   {"im", amp.imag()}});
  }
  return out;
}

SparseState state_from_json(const nlohmann::json& j, const ModeLayout& layout, unsigned n_max) {
  SparseState out(layout, n_max);
  for (const auto& term : j) {
    const auto counts = term.at("occupation").get<std::vector<unsigned>>();
    if (counts.size() != layout.size()) throw Error("occupation length does not match layout");
    Occupation occ;
    for (std::size_t i = 0; i < counts.size(); ++i) occ[i] = static_cast<std::uint8_t>(counts[i]);
    out.add(occ, {term.at("re").get<double>(), term.at("im").get<double>()});
  }
  return out;
}

}  // namespace lopt
