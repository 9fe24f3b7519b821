#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "enzlogic/kinetics.hpp"

namespace enzlogic {

using Waveforms = std::map<std::string, Schedule>;

/// 0/1 square wave starting at t0, switching every half period.
Schedule square_wave(double period, double t_end, bool start_high = false, double t0 = 0.0);

/// 1 - x at every step.
Schedule complement(const Schedule& s);

struct RandomWaveformSpec {
  double t_end = 100.0;
  double min_segment = 10.0;
  double max_segment = 20.0;
  std::uint64_t seed = 1;
};

/// Binary waveforms for every named input. All inputs share the same edge
/// times; segment lengths are uniform in [min_segment, max_segment] and the
/// input vector differs across every edge. Deterministic in the seed.
Waveforms random_waveforms(const std::vector<std::string>& inputs, const RandomWaveformSpec& spec);

/// Sorted union of switch points strictly inside (t0, t1).
std::vector<double> edge_times(const Waveforms& w, double t0, double t1);

}  // namespace enzlogic
