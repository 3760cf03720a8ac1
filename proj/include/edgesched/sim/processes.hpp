#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "edgesched/core/random.hpp"
#include "edgesched/core/scenario.hpp"
#include "edgesched/core/types.hpp"

namespace edgesched {

// Arrival instants in ms. Poisson: exponential gaps from `rng`. Fixed: the
// k-th arrival (1-based) lands at k * 1000 / rate.
inline std::vector<double> schedule_arrival_process(double rate, std::size_t count, Rng& rng,
                                                    ArrivalMode mode = ArrivalMode::Poisson) {
  std::vector<double> out;
  out.reserve(count);
  const double gap_ms = 1000.0 / rate;
  double t = 0;
  for (std::size_t k = 1; k <= count; ++k) {
    if (mode == ArrivalMode::FixedInterval) {
      out.push_back(static_cast<double>(k) * gap_ms);
    } else {
      t += 1000.0 * rng.exponential(rate);
      out.push_back(t);
    }
  }
  return out;
}

// Multiplicative log-normal noise with median 1.
inline double service_noise(Rng& rng, double sigma) {
  return sigma > 0 ? std::exp(sigma * rng.normal()) : 1.0;
}

inline double edge_service_time(const NodeDescriptor& node, double noise_multiplier = 1.0) {
  return node.base_service_ms() * noise_multiplier;
}

inline double edge_service_time(const NodeDescriptor& node, Rng& rng, double sigma) {
  return edge_service_time(node, service_noise(rng, sigma));
}

inline double transfer_time(double payload_mbit, double link_bandwidth, double latency_ms,
                            double extra_latency_ms) {
  return latency_ms + extra_latency_ms + 1000.0 * payload_mbit / link_bandwidth;
}

// Cloud inference cost, proportional to the image area it has to look at.
inline double cloud_service_time(double payload_mbit, const CloudParams& cloud,
                                 double frame_size_mbit, bool full_frame) {
  const double reference_crops = payload_mbit / (cloud.reference_crop_fraction * frame_size_mbit);
  const double ms = 1000.0 * reference_crops / cloud.service_rate;
  return full_frame ? ms * cloud.cloud_only_multiplier : ms;
}

struct CropDraw {
  unsigned count = 0;
  double total_mbit = 0;
};

// Poisson crop count truncated (by rejection) at max_count; each crop covers
// a uniform fraction of the frame.
inline CropDraw draw_crops(Rng& rng, const WorkloadParams& w) {
  CropDraw d;
  do {
    d.count = rng.poisson(w.crop_mean_count);
  } while (d.count > w.crop_max_count);
  for (unsigned i = 0; i < d.count; ++i) {
    d.total_mbit += w.frame_size_mbit * rng.uniform(w.crop_fraction_min, w.crop_fraction_max);
  }
  d.total_mbit = std::min(d.total_mbit, w.frame_size_mbit);
  return d;
}

}  // namespace edgesched
