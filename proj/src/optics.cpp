#include "lopt/optics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

namespace lopt {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<std::string> referenced_modes(const OpticalElement& element) {
  return std::visit(
      overloaded{
          [](const Beamsplitter& e) { return std::vector<std::string>{e.first, e.second}; },
          [](const PhaseShift& e) { return std::vector<std::string>{e.mode}; },
          [](const HalfWavePlate& e) { return std::vector<std::string>{e.mode_h, e.mode_v}; },
          [](const PolarizingBS& e) {
            std::vector<std::string> out;
            for (const auto* m : {&e.h1, &e.v1, &e.h2, &e.v2}) {
              if (!m->empty()) out.push_back(*m);
            }
            return out;
          },
      },
      element);
}

void set_block(ModeMatrix& m, std::size_t i, std::size_t j, Amplitude ii, Amplitude ij,
               Amplitude ji, Amplitude jj) {
  m(i, i) = ii;
  m(i, j) = ij;
  m(j, i) = ji;
  m(j, j) = jj;
}

}  // namespace

void validate(const OpticalElement& element, const ModeLayout& layout) {
  if (const auto* pbs = std::get_if<PolarizingBS>(&element)) {
    if (pbs->v1.empty() || pbs->v2.empty()) throw Error("PBS needs both vertical modes");
  }
  const auto modes = referenced_modes(element);
  std::set<std::string> distinct;
  for (const auto& m : modes) {
    layout.index(m);
    if (!distinct.insert(m).second) throw Error("element references mode '" + m + "' twice");
  }
}

void validate(const Circuit& circuit, const ModeLayout& layout) {
  for (const auto& e : circuit.elements) validate(e, layout);
}

ModeMatrix mode_matrix(const OpticalElement& element, const ModeLayout& layout) {
  validate(element, layout);
  const auto n = static_cast<Eigen::Index>(layout.size());
  ModeMatrix m = ModeMatrix::Identity(n, n);
  std::visit(overloaded{
                 [&](const Beamsplitter& e) {
                   const double c = std::cos(e.theta), s = std::sin(e.theta);
                   set_block(m, layout.index(e.first), layout.index(e.second), c, s, s, -c);
                 },
                 [&](const PhaseShift& e) {
                   const auto i = layout.index(e.mode);
                   m(i, i) = std::polar(1.0, e.theta);
                 },
                 [&](const HalfWavePlate& e) {
                   const double c = std::cos(2 * e.angle), s = std::sin(2 * e.angle);
                   set_block(m, layout.index(e.mode_h), layout.index(e.mode_v), c, s, s, -c);
                 },
                 [&](const PolarizingBS& e) {
                   set_block(m, layout.index(e.v1), layout.index(e.v2), 0, 1, 1, 0);
                 },
             },
             element);
  return m;
}

ModeMatrix circuit_matrix(const Circuit& circuit, const ModeLayout& layout) {
  const auto n = static_cast<Eigen::Index>(layout.size());
  ModeMatrix total = ModeMatrix::Identity(n, n);
  for (const auto& e : circuit.elements) total = mode_matrix(e, layout) * total;
  return total;
}

bool is_unitary(const ModeMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const ModeMatrix d = m * m.adjoint() - ModeMatrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

namespace {

using Polynomial = std::unordered_map<Occupation, Amplitude, OccupationHash>;

// Expansion of prod_i (sum_j M(j,i) a_j^dagger)^{n_i} / sqrt(n_i!) |0>
// restricted to the active modes, already converted to Fock amplitudes.
std::vector<std::pair<Occupation, Amplitude>> expand_active(
    const Occupation& active_occ, const ModeMatrix& m, const std::vector<std::size_t>& active) {
  Polynomial poly{{Occupation{}, 1.0}};
  double input_norm = 1.0;
  for (std::size_t i : active) {
    for (unsigned k = 1; k <= active_occ[i]; ++k) {
      input_norm *= k;
      Polynomial next;
      next.reserve(poly.size() * active.size());
      for (const auto& [mono, c] : poly) {
        for (std::size_t j : active) {
          const Amplitude mji = m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
          if (mji == 0.0) continue;
          Occupation grown = mono;
          ++grown[j];
          next[grown] += c * mji;
        }
      }
      poly = std::move(next);
    }
  }
  std::vector<std::pair<Occupation, Amplitude>> out;
  out.reserve(poly.size());
  for (const auto& [mono, c] : poly) {
    double fact = 1.0;
    for (std::size_t j : active) {
      for (unsigned k = 2; k <= mono[j]; ++k) fact *= k;
    }
    out.emplace_back(mono, c * std::sqrt(fact / input_norm));
  }
  return out;
}

}  // namespace

SparseState apply_mode_matrix(const SparseState& state, const ModeMatrix& m) {
  const std::size_t modes = state.layout().size();
  if (static_cast<std::size_t>(m.rows()) != modes || static_cast<std::size_t>(m.cols()) != modes) {
    throw Error("mode matrix dimension does not match layout");
  }
  if (!is_unitary(m)) throw Error("mode matrix is not unitary");

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < modes; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    bool identity_col = true;
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
      const Amplitude expect = (j == ii) ? 1.0 : 0.0;
      if (m(j, ii) != expect || m(ii, j) != expect) {
        identity_col = false;
        break;
      }
    }
    if (!identity_col) active.push_back(i);
  }
  if (active.empty()) return state;

  std::unordered_map<Occupation, std::vector<std::pair<Occupation, Amplitude>>, OccupationHash>
      cache;
  SparseState out(state.layout(), state.n_max());
  for (const auto& [occ, amp] : state.terms()) {
    Occupation active_occ;
    Occupation passive = occ;
    for (std::size_t i : active) {
      active_occ[i] = occ[i];
      passive[i] = 0;
    }
    auto it = cache.find(active_occ);
    if (it == cache.end()) it = cache.emplace(active_occ, expand_active(active_occ, m, active)).first;
    for (const auto& [delta, c] : it->second) {
      Occupation target = passive;
      for (std::size_t j : active) target[j] = delta[j];
      out.add(target, amp * c);
    }
  }
  out.prune();
  return out;
}

SparseState apply_element(const SparseState& state, const OpticalElement& element) {
  return apply_mode_matrix(state, mode_matrix(element, state.layout()));
}

SparseState apply_circuit(const SparseState& state, const Circuit& circuit) {
  SparseState current = state;
  for (const auto& e : circuit.elements) current = apply_element(current, e);
  return current;
}

std::vector<Occupation> fock_basis(std::size_t modes, unsigned n_max) {
  if (modes > kMaxModes) throw Error("too many modes for a Fock basis");
  std::vector<Occupation> out;
  for (unsigned total = 0; total <= n_max; ++total) {
    // Compositions of `total` into `modes` parts, first mode descending.
    std::vector<Occupation> level;
    Occupation cur;
    auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
      if (modes == 0) return;
      if (i + 1 == modes) {
        cur[i] = static_cast<std::uint8_t>(left);
        level.push_back(cur);
        return;
      }
      for (int k = static_cast<int>(left); k >= 0; --k) {
        cur[i] = static_cast<std::uint8_t>(k);
        self(self, i + 1, left - static_cast<unsigned>(k));
      }
      cur[i] = 0;
    };
    if (modes == 0) {
      if (total == 0) out.push_back(Occupation{});
      continue;
    }
    rec(rec, 0, total);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

namespace {

// Ryser formula.
Amplitude permanent(const Eigen::MatrixXcd& a) {
  const auto n = a.rows();
  if (n == 0) return 1.0;
  Amplitude total{};
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t s = 1; s < subsets; ++s) {
    Amplitude prod = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      Amplitude row{};
      for (Eigen::Index j = 0; j < n; ++j) {
        if (s & (std::uint64_t{1} << j)) row += a(i, j);
      }
      prod *= row;
    }
    const int bits = std::popcount(s);
    total += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
  }
  return total;
}

double factorial_product(const Occupation& o, std::size_t modes) {
  double f = 1.0;
  for (std::size_t i = 0; i < modes; ++i) {
    for (unsigned k = 2; k <= o[i]; ++k) f *= k;
  }
  return f;
}

std::vector<Eigen::Index> expand_indices(const Occupation& o, std::size_t modes) {
  std::vector<Eigen::Index> idx;
  for (std::size_t i = 0; i < modes; ++i) {
    for (unsigned k = 0; k < o[i]; ++k) idx.push_back(static_cast<Eigen::Index>(i));
  }
  return idx;
}

}  // namespace

Eigen::MatrixXcd dense_lift_oracle(const ModeMatrix& m, const ModeLayout& layout,
                                   unsigned n_max) {
  const std::size_t modes = layout.size();
  if (static_cast<std::size_t>(m.rows()) != modes) throw Error("mode matrix dimension mismatch");
  const auto basis = fock_basis(modes, n_max);
  if (basis.size() > kDenseOracleLimit) {
    throw Error("dense oracle basis dimension " + std::to_string(basis.size()) +
                " exceeds limit");
  }
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const auto& in = basis[static_cast<std::size_t>(col)];
    const auto cols = expand_indices(in, modes);
    for (Eigen::Index row = 0; row < dim; ++row) {
      const auto& out = basis[static_cast<std::size_t>(row)];
      if (out.total() != in.total()) continue;
      const auto rows = expand_indices(out, modes);
      Eigen::MatrixXcd sub(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(cols.size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
          sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(rows[r], cols[c]);
        }
      }
      u(row, col) = permanent(sub) /
                    std::sqrt(factorial_product(in, modes) * factorial_product(out, modes));
    }
  }
  return u;
}

nlohmann::json circuit_to_json(const Circuit& circuit) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& element : circuit.elements) {
    std::visit(overloaded{
                   [&](const Beamsplitter& e) {
                     out.push_back({{"type", "beamsplitter"},
                                    {"modes", {e.first, e.second}},
                                    {"theta", e.theta}});
                   },
                   [&](const PhaseShift& e) {
                     out.push_back({{"type", "phase"}, {"modes", {e.mode}}, {"theta", e.theta}});
                   },
                   [&](const HalfWavePlate& e) {
                     out.push_back({{"type", "hwp"},
                                    {"modes", {e.mode_h, e.mode_v}},
                                    {"theta", e.angle}});
                   },
                   [&](const PolarizingBS& e) {
                     nlohmann::json modes = nlohmann::json::array();
                     for (const auto* m : {&e.h1, &e.v1, &e.h2, &e.v2}) {
                       modes.push_back(m->empty() ? nlohmann::json(nullptr) : nlohmann::json(*m));
                     }
                     out.push_back({{"type", "pbs"}, {"modes", modes}});
                   },
               },
               element);
  }
  return out;
}

Circuit circuit_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error("circuit description must be a JSON array");
  Circuit c;
  for (const auto& item : j) {
    const auto type = item.at("type").get<std::string>();
    const auto& modes = item.at("modes");
    auto mode = [&](std::size_t i) -> std::string {
      if (i >= modes.size()) throw Error("element '" + type + "' is missing modes");
      return modes[i].is_null() ? std::string{} : modes[i].get<std::string>();
    };
    auto expect_modes = [&](std::size_t n) {
      if (modes.size() != n) {
        throw Error("element '" + type + "' expects " + std::to_string(n) + " modes");
      }
    };
    if (type == "beamsplitter") {
      expect_modes(2);
      c.then(Beamsplitter{item.at("theta").get<double>(), mode(0), mode(1)});
    } else if (type == "phase") {
      expect_modes(1);
      c.then(PhaseShift{item.at("theta").get<double>(), mode(0)});
    } else if (type == "hwp") {
      expect_modes(2);
      c.then(HalfWavePlate{mode(0), mode(1), item.value("theta", std::numbers::pi / 8)});
    } else if (type == "pbs") {
      expect_modes(4);
      c.then(PolarizingBS{mode(0), mode(1), mode(2), mode(3)});
    } else {
      throw Error("unknown element type '" + type + "'");
    }
  }
  return c;
}

}  // namespace lopt
