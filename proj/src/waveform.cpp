#include "enzlogic/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "enzlogic/errors.hpp"

namespace enzlogic {

Schedule square_wave(double period, double t_end, bool start_high, double t0) {
  if (!(period > 0.0) || !std::isfinite(period)) throw DomainError("square wave period must be positive");
  if (!(t_end >= t0)) throw DomainError("square wave must end after it starts");
  std::vector<Schedule::Step> steps;
  bool level = start_high;
  for (double t = t0; t <= t_end; t += 0.5 * period) {
    steps.push_back({t, level ? 1.0 : 0.0});
    level = !level;
  }
  return Schedule::from_steps(std::move(steps));
}

Schedule complement(const Schedule& s) {
  auto steps = s.steps();
  for (auto& st : steps) st.value = 1.0 - st.value;
  return Schedule::from_steps(std::move(steps));
}

Waveforms random_waveforms(const std::vector<std::string>& inputs, const RandomWaveformSpec& spec) {
  if (!(spec.min_segment > 0.0) || spec.max_segment < spec.min_segment)
    throw DomainError("random waveform segments need 0 < min_segment <= max_segment");
  if (!(spec.t_end > 0.0)) throw DomainError("random waveform t_end must be positive");
  if (inputs.size() > 30) throw DomainError("too many random waveform inputs");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> seg(spec.min_segment, spec.max_segment);
  const std::uint32_t n = static_cast<std::uint32_t>(inputs.size());
  const std::uint32_t vectors = 1u << n;
  std::uniform_int_distribution<std::uint32_t> pick(0, vectors - 1);

  std::vector<std::vector<Schedule::Step>> steps(n);
  std::uint32_t v = pick(rng);
  for (double t = 0.0; t < spec.t_end; t += seg(rng)) {
    if (t > 0.0 && vectors > 1) {
      // Uniform over the vectors other than the current one.
      const auto w = std::uniform_int_distribution<std::uint32_t>(0, vectors - 2)(rng);
      v = w >= v ? w + 1 : w;
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      const double level = (v >> (n - 1 - i)) & 1u ? 1.0 : 0.0;
      if (steps[i].empty() || steps[i].back().value != level) steps[i].push_back({t, level});
    }
  }
  Waveforms out;
  for (std::uint32_t i = 0; i < n; ++i) out.emplace(inputs[i], Schedule::from_steps(steps[i]));
  return out;
}

std::vector<double> edge_times(const Waveforms& w, double t0, double t1) {
  std::vector<double> out;
  for (const auto& [name, s] : w) {
    const auto sw = s.switch_points(t0, t1);
    out.insert(out.end(), sw.begin(), sw.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace enzlogic
