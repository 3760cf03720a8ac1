#pragma once

#include <algorithm>
#include <cstddef>

#include "edgesched/core/errors.hpp"
#include "edgesched/core/types.hpp"

namespace edgesched {

// Calibration range for the min-max maps. Latency bounds are the raw link
// range; the regime's added latency shifts both ends (see effective_bounds).
struct NormalizationBounds {
  double bandwidth_min = 20;   // Mbit/s
  double bandwidth_max = 200;
  double latency_min = 5;      // ms
  double latency_max = 60;

  void validate() const {
    if (!(bandwidth_min < bandwidth_max)) {
      throw ConfigError("bounds.bandwidth", "bandwidth_min must be < bandwidth_max");
    }
    if (!(latency_min < latency_max)) {
      throw ConfigError("bounds.latency", "latency_min must be < latency_max");
    }
  }

  NormalizationBounds shifted_latency(double extra_ms) const {
    NormalizationBounds out = *this;
    out.latency_min += extra_ms;
    out.latency_max += extra_ms;
    return out;
  }

  bool operator==(const NormalizationBounds&) const = default;
};

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Affine min-max map into [0,1], favorable-is-high. Inputs outside the
// calibration range are clamped.
inline ResourceStateVector normalize_sample(const RawNodeSample& raw,
                                            const NormalizationBounds& bounds,
                                            std::size_t queue_capacity) {
  ResourceStateVector r;
  r.u = clamp01(raw.cpu_idle_fraction);
  r.q = queue_capacity == 0
            ? 0.0
            : 1.0 - clamp01(static_cast<double>(raw.queue_length) /
                            static_cast<double>(queue_capacity));
  r.b = clamp01((raw.available_bandwidth - bounds.bandwidth_min) /
                (bounds.bandwidth_max - bounds.bandwidth_min));
  r.l = 1.0 - clamp01((raw.link_latency - bounds.latency_min) /
                      (bounds.latency_max - bounds.latency_min));
  return r;
}

}  // namespace edgesched
