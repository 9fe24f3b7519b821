#include "enzlogic/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "enzlogic/errors.hpp"

namespace enzlogic {

namespace {

bool in_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

Schedule::Schedule() : steps_{{-std::numeric_limits<double>::infinity(), 0.0}} {}

Schedule Schedule::constant(double value) {
  return from_steps({{-std::numeric_limits<double>::infinity(), value}});
}

Schedule Schedule::from_steps(std::vector<Step> steps) {
  if (steps.empty()) throw ScheduleError("schedule needs at least one step");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!in_unit(steps[i].value)) {
      std::ostringstream os;
      os << "schedule value " << steps[i].value << " at t=" << steps[i].time
         << " outside [0,1]";
      throw ScheduleError(os.str());
    }
    if (std::isnan(steps[i].time) || (i > 0 && !(steps[i].time > steps[i - 1].time)))
      throw ScheduleError("schedule switch times must be strictly increasing");
  }
  return Schedule(std::move(steps));
}

double Schedule::at(double t) const {
  if (t < start()) {
    std::ostringstream os;
    os << "schedule undefined at t=" << t << " (starts at " << start() << ")";
    throw ScheduleError(os.str());
  }
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                             [](double v, const Step& s) { return v < s.time; });
  return std::prev(it)->value;
}

std::vector<double> Schedule::switch_points(double t0, double t1) const {
  std::vector<double> out;
  for (std::size_t i = 1; i < steps_.size(); ++i) {
    const auto& s = steps_[i];
    if (s.time > t0 && s.time < t1 && s.value != steps_[i - 1].value) out.push_back(s.time);
  }
  return out;
}

std::size_t ReactionNetwork::add_pair(std::string substrate, std::string product, double s0) {
  pairs.push_back({std::move(substrate), std::move(product), s0});
  return pairs.size() - 1;
}

std::size_t ReactionNetwork::add_enzyme(EnzymeSignal enzyme) {
  enzymes.push_back(std::move(enzyme));
  return enzymes.size() - 1;
}

void ReactionNetwork::add_conversion(std::size_t pair, Slot from, std::size_t enzyme) {
  conversions.push_back({pair, from, enzyme});
}

void ReactionNetwork::couple(std::size_t enzyme, SpeciesRef source) {
  couplings.push_back({enzyme, source});
}

void ReactionNetwork::validate() const {
  std::set<std::string> names;
  auto claim = [&](const std::string& n) {
    if (n.empty()) throw DomainError("empty species or enzyme name");
    if (!names.insert(n).second) throw DomainError("duplicate name '" + n + "'");
  };
  for (const auto& p : pairs) {
    claim(p.substrate);
    claim(p.product);
    if (!in_unit(p.s))
      throw DomainError("initial concentration of '" + p.substrate + "' outside [0,1]");
  }
  for (const auto& e : enzymes) {
    claim(e.name);
    if (!(e.k_cat > 0.0) || !std::isfinite(e.k_cat))
      throw DomainError("k_cat of '" + e.name + "' must be positive");
    if (!(e.k_m > 0.0) || !std::isfinite(e.k_m))
      throw DomainError("K_m of '" + e.name + "' must be positive");
  }
  for (const auto& c : conversions) {
    if (c.pair >= pairs.size()) throw DomainError("conversion references a missing pair");
    if (c.enzyme >= enzymes.size()) throw DomainError("conversion references a missing enzyme");
  }
  std::vector<bool> coupled(enzymes.size(), false);
  for (const auto& c : couplings) {
    if (c.enzyme >= enzymes.size()) throw DomainError("coupling references a missing enzyme");
    if (c.source.pair >= pairs.size()) throw DomainError("coupling references a missing pair");
    if (coupled[c.enzyme])
      throw DomainError("enzyme '" + enzymes[c.enzyme].name + "' coupled more than once");
    coupled[c.enzyme] = true;
  }
}

std::vector<double> ReactionNetwork::initial_state() const {
  std::vector<double> y;
  y.reserve(pairs.size());
  for (const auto& p : pairs) y.push_back(p.s);
  return y;
}

const EnzymeCoupling* ReactionNetwork::coupling_of(std::size_t enzyme) const {
  for (const auto& c : couplings)
    if (c.enzyme == enzyme) return &c;
  return nullptr;
}

double species_concentration(SpeciesRef ref, std::span<const double> state) {
  const double s = state[ref.pair];
  return ref.slot == Slot::substrate ? s : 1.0 - s;
}

double ReactionNetwork::enzyme_concentration(std::size_t enzyme, double t,
                                             std::span<const double> state) const {
  if (const auto* c = coupling_of(enzyme)) return species_concentration(c->source, state);
  return enzymes[enzyme].schedule.at(t);
}

double michaelis_rate(double k_cat, double e_conc, double k_m, double s_conc) {
  if (!std::isfinite(k_cat) || !std::isfinite(e_conc) || !std::isfinite(k_m) ||
      !std::isfinite(s_conc))
    throw DomainError("michaelis_rate: non-finite input");
  if (!(k_m > 0.0)) throw DomainError("michaelis_rate: K_m must be positive");
  if (k_cat < 0.0) throw DomainError("michaelis_rate: k_cat must be non-negative");
  if (!in_unit(e_conc)) throw DomainError("michaelis_rate: enzyme concentration outside [0,1]");
  if (!in_unit(s_conc)) throw DomainError("michaelis_rate: substrate concentration outside [0,1]");
  return k_cat * e_conc * s_conc / (k_m + s_conc);
}

double net_rate(const ReactionNetwork& network, std::span<const double> state,
                std::size_t pair, double t) {
  if (pair >= network.pairs.size()) throw DomainError("net_rate: pair not in network");
  double rate = 0.0;
  for (const auto& c : network.conversions) {
    if (c.pair != pair) continue;
    const auto& enz = network.enzymes[c.enzyme];
    const double x = species_concentration({c.pair, c.from}, state);
    const double v = michaelis_rate(enz.k_cat, network.enzyme_concentration(c.enzyme, t, state),
                                    enz.k_m, x);
    rate += c.from == Slot::product ? v : -v;
  }
  return rate;
}

double net_rate(const ReactionNetwork& network, std::size_t pair, double t) {
  const auto y = network.initial_state();
  return net_rate(network, y, pair, t);
}

}  // namespace enzlogic
