#include "lopt/detection.hpp"

#include <set>

namespace lopt {

bool Outcome::accepts(unsigned photons) const {
  switch (kind) {
    case OutcomeKind::NoClick:
      return photons == 0;
    case OutcomeKind::Click:
      return photons >= 1;
    case OutcomeKind::Exactly:
      return photons == count;
  }
  return false;
}

Detector single_mode(std::string mode, Outcome outcome) {
  std::string name = mode;
  return Detector{std::move(name), {std::move(mode)}, outcome};
}

Detector bucket(std::string name, std::vector<std::string> modes, Outcome outcome) {
  return Detector{std::move(name), std::move(modes), outcome};
}

void validate(const DetectorPattern& pattern, const ModeLayout& layout) {
  std::set<std::size_t> used;
  for (const auto& d : pattern.detectors) {
    if (d.modes.empty()) throw Error("detector '" + d.name + "' watches no modes");
    for (const auto& m : d.modes) {
      if (!used.insert(layout.index(m)).second) {
        throw Error("detector buckets overlap on mode '" + m + "'");
      }
    }
  }
}

CompiledPattern::CompiledPattern(const DetectorPattern& pattern, const ModeLayout& layout) {
  validate(pattern, layout);
  for (const auto& d : pattern.detectors) {
    std::vector<std::size_t> idx;
    for (const auto& m : d.modes) idx.push_back(layout.index(m));
    detectors_.emplace_back(std::move(idx), d.outcome);
  }
}

bool CompiledPattern::accepts(const Occupation& occ) const {
  for (const auto& [idx, outcome] : detectors_) {
    unsigned n = 0;
    for (auto i : idx) n += occ[i];
    if (!outcome.accepts(n)) return false;
  }
  return true;
}

double outcome_probability(const SparseState& state, const DetectorPattern& pattern) {
  const CompiledPattern compiled(pattern, state.layout());
  double p = 0.0;
  for (const auto& [occ, amp] : state.terms()) {
    if (compiled.accepts(occ)) p += std::norm(amp);
  }
  return p;
}

Conditioned conditional_state(const SparseState& state, const DetectorPattern& pattern) {
  const auto& layout = state.layout();
  const CompiledPattern compiled(pattern, layout);
  std::vector<bool> measured(layout.size(), false);
  for (const auto& d : pattern.detectors) {
    if (d.outcome.kind != OutcomeKind::Exactly) {
      throw Error("conditioning requires Exactly outcomes (detector '" + d.name + "')");
    }
    if (d.modes.size() > 1 && d.outcome.count != 0) {
      throw Error("conditioning on a multi-mode bucket with nonzero count leaves a mixed state");
    }
    for (const auto& m : d.modes) measured[layout.index(m)] = true;
  }

  std::vector<std::string> kept_names;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (!measured[i]) {
      kept.push_back(i);
      kept_names.push_back(layout.name(i));
    }
  }

  SparseState out(ModeLayout(std::move(kept_names)), state.n_max());
  double p = 0.0;
  for (const auto& [occ, amp] : state.terms()) {
    if (!compiled.accepts(occ)) continue;
    p += std::norm(amp);
    Occupation reduced;
    for (std::size_t k = 0; k < kept.size(); ++k) reduced[k] = occ[kept[k]];
    out.add(reduced, amp);
  }
  if (p == 0.0 || out.empty()) throw Error("conditioning annihilates state");
  return {normalize(out), p};
}

CoincidenceTable coincidence_table(const SparseState& state,
                                   const std::pair<std::string, std::string>& control,
                                   const std::pair<std::string, std::string>& target,
                                   const DetectorPattern& ancilla) {
  auto probability = [&](bool control_v, bool target_v) {
    DetectorPattern p = ancilla;
    p.detectors.push_back(single_mode(control.first, control_v ? Outcome::no_click() : Outcome::click()));
    p.detectors.push_back(single_mode(control.second, control_v ? Outcome::click() : Outcome::no_click()));
    p.detectors.push_back(single_mode(target.first, target_v ? Outcome::no_click() : Outcome::click()));
    p.detectors.push_back(single_mode(target.second, target_v ? Outcome::click() : Outcome::no_click()));
    return outcome_probability(state, p);
  };
  return {probability(false, false), probability(false, true), probability(true, false),
          probability(true, true)};
}

nlohmann::json pattern_to_json(const DetectorPattern& pattern) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : pattern.detectors) {
    nlohmann::json outcome;
    switch (d.outcome.kind) {
      case OutcomeKind::NoClick:
        outcome = "noclick";
        break;
      case OutcomeKind::Click:
        outcome = "click";
        break;
      case OutcomeKind::Exactly:
        outcome = {{"exactly", d.outcome.count}};
        break;
    }
    out.push_back({{"detector", d.name}, {"modes", d.modes}, {"outcome", outcome}});
  }
  return out;
}

DetectorPattern pattern_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error("detector pattern must be a JSON array");
  DetectorPattern p;
  for (const auto& item : j) {
    Detector d;
    d.modes = item.at("modes").get<std::vector<std::string>>();
    d.name = item.value("detector", d.modes.empty() ? std::string{} : d.modes.front());
    const auto& o = item.at("outcome");
    if (o.is_string() && o == "click") {
      d.outcome = Outcome::click();
    } else if (o.is_string() && o == "noclick") {
      d.outcome = Outcome::no_click();
    } else if (o.is_object() && o.contains("exactly")) {
      const auto k = o.at("exactly").get<int>();
      if (k < 0) throw Error("exactly count must be non-negative");
      d.outcome = Outcome::exactly(static_cast<unsigned>(k));
    } else {
      throw Error("unrecognized detector outcome " + o.dump());
    }
    p.detectors.push_back(std::move(d));
  }
  return p;
}

}  // namespace lopt
