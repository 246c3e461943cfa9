#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace lopt {

using Amplitude = std::complex<double>;

inline constexpr std::size_t kMaxModes = 16;
inline constexpr double kPruneThreshold = 1e-15;
inline constexpr unsigned kDefaultMaxPhotons = 6;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ordered registry of named optical modes. Index lookup is a bijection onto
// 0..size()-1.
class ModeLayout {
 public:
  ModeLayout() = default;
  explicit ModeLayout(std::vector<std::string> names);
  ModeLayout(std::initializer_list<std::string> names)
      : ModeLayout(std::vector<std::string>(names)) {}

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name).has_value(); }

  // Layout with other's modes appended; mode sets must be disjoint.
  ModeLayout concat(const ModeLayout& other) const;

  bool operator==(const ModeLayout& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
};

// Photon count per mode. Entries beyond the layout size stay zero so that
// value comparison and hashing are layout independent.
struct Occupation {
  std::array<std::uint8_t, kMaxModes> n{};

  std::uint8_t& operator[](std::size_t i) { return n[i]; }
  std::uint8_t operator[](std::size_t i) const { return n[i]; }
  unsigned total() const;

  auto operator<=>(const Occupation&) const = default;
  bool operator==(const Occupation&) const = default;
};

struct OccupationHash {
  std::size_t operator()(const Occupation& o) const noexcept;
};

Occupation make_occupation(const ModeLayout& layout,
                           std::initializer_list<std::pair<std::string_view, unsigned>> counts);
Occupation make_occupation(std::initializer_list<unsigned> counts);
std::vector<unsigned> to_vector(const Occupation& occ, std::size_t modes);

// Map from occupation vectors to complex amplitudes with a total-photon
// truncation bound carried by the state. Terms above n_max are never stored.
class SparseState {
 public:
  using TermMap = std::unordered_map<Occupation, Amplitude, OccupationHash>;

  SparseState() = default;
  SparseState(ModeLayout layout, unsigned n_max);

  const ModeLayout& layout() const { return layout_; }
  unsigned n_max() const { return n_max_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  Amplitude amplitude(const Occupation& occ) const;

  // Accumulates into a term; silently drops occupations above n_max.
  void add(const Occupation& occ, Amplitude amp);
  void prune(double threshold = kPruneThreshold);

  double norm_squared() const;
  double norm() const;

  std::vector<std::pair<Occupation, Amplitude>> sorted_terms() const;

 private:
  ModeLayout layout_;
  unsigned n_max_ = 0;
  TermMap terms_;
};

SparseState vacuum(const ModeLayout& layout, unsigned n_max = kDefaultMaxPhotons);
SparseState basis_state(const ModeLayout& layout, const Occupation& occ,
                        unsigned n_max = kDefaultMaxPhotons);

// coeff * prod_i (a_i^dagger)^{powers_i} applied to the state.
SparseState apply_monomial(const SparseState& state, const Occupation& powers,
                           Amplitude coeff = 1.0);

Amplitude inner_product(const SparseState& bra, const SparseState& ket);
SparseState normalize(const SparseState& state);
SparseState truncate(const SparseState& state, unsigned n_max);
SparseState scale(const SparseState& state, Amplitude c);
// s1 + c * s2 on a common layout; the result carries the smaller n_max.
SparseState add_scaled(const SparseState& s1, const SparseState& s2, Amplitude c);
// Product state on the concatenated layout, truncated at max(n_max).
SparseState tensor(const SparseState& s1, const SparseState& s2);
// Re-expresses a state on a larger layout by mode name; missing modes are vacuum.
SparseState embed(const SparseState& state, const ModeLayout& target);
// Terms with total photon number exactly n.
SparseState photon_sector(const SparseState& state, unsigned n);

double fidelity(const SparseState& a, const SparseState& b);

// Debug form: [{occupation, re, im}, ...] in lexicographic occupation order.
nlohmann::json to_json(const SparseState& state);
SparseState state_from_json(const nlohmann::json& j, const ModeLayout& layout, unsigned n_max);

}  // namespace lopt
