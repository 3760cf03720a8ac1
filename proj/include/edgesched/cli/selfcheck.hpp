#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "edgesched/core/random.hpp"
#include "edgesched/core/scenario.hpp"
#include "edgesched/lora/adapter.hpp"
#include "edgesched/metrics/aggregate.hpp"
#include "edgesched/scheduler/scoring.hpp"
#include "edgesched/sim/simulator.hpp"
#include "edgesched/visualprep/augment.hpp"

namespace edgesched::cli {

// Quick module oracles for `edgesched selfcheck`. The acceptance binary
// runs the full-size versions.
inline bool run_selfcheck(std::ostream& out) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    out << (ok ? "ok   " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  {
    Rng rng(7);
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
      const ResourceStateVector r{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
      const SchedulingWeights w{rng.uniform(), rng.uniform(), rng.uniform(), rng.uniform()};
      double expect = 0;
      const auto ra = r.as_array();
      const auto wa = w.as_array();
      for (int k = 0; k < 4; ++k) expect += ra[k] * wa[k];
      const double s0 = rng.uniform(), eta = rng.uniform();
      ok = std::abs(instant_score(r, w) - expect) <= 1e-12 &&
           std::abs(smooth_update(s0, expect, eta) - (s0 + (1 - eta) * (expect - s0))) <= 1e-12;
    }
    report("scheduler: fusion and smoothing", ok);
  }

  {
    bool ok = true;
    for (double eta : {0.3, 0.7, 0.9}) {
      double s = 0;
      const double target = 0.6;
      for (int t = 1; t <= 100; ++t) {
        s = smooth_update(s, target, eta);
        ok = ok && std::abs(s - target) <= std::pow(eta, t) * target + 1e-12;
      }
    }
    report("scheduler: smoothing contraction", ok);
  }

  {
    visual::Raster img(16, 12);
    for (int y = 0; y < 12; ++y) {
      for (int x = 0; x < 16; ++x) {
        img.set(x, y, {static_cast<std::uint8_t>(x * 16), static_cast<std::uint8_t>(y * 20), 77});
      }
    }
    const visual::BBox box{3, 2, 9, 7};
    const auto c = visual::crop(img, box);
    bool ok = c.width() == 6 && c.height() == 5;
    for (int y = 0; ok && y < 5; ++y) {
      for (int x = 0; ok && x < 6; ++x) ok = c.at(x, y) == img.at(x + 3, y + 2);
    }
    report("visualprep: crop", ok);

    const auto same = visual::hsv_scale(img, 1.0, 1.0);
    bool rt = true;
    for (std::size_t i = 0; i < img.data().size(); ++i) {
      rt = rt && std::abs(int(img.data()[i]) - int(same.data()[i])) <= 1;
    }
    report("visualprep: hsv round trip", rt);
  }

  {
    lora::LoraAdapter ad{lora::DenseMatrix{{3, 4}}, lora::DenseMatrix{{1}, {2}}, 2.0, 1};
    const auto merged = lora::merge(lora::DenseMatrix::identity(2), ad);
    report("lora: merge fixture", merged == lora::DenseMatrix{{7, 8}, {12, 17}});
    lora::LoraAdapter reg{lora::DenseMatrix{{1, 2}, {3, 4}}, lora::DenseMatrix(2, 2), 1.0, 2};
    report("lora: regularizer fixture", lora::reg_term(reg) == 30.0);
    Rng rng(3);
    const auto zero = lora::init_adapter(8, 2, 0.02, rng);
    const auto w = lora::DenseMatrix::identity(8);
    report("lora: zero init leaves W unchanged", lora::merge(w, zero) == w);
  }

  {
    ScenarioConfig cfg = make_cell(ScenarioConfig{}, PolicyKind::Dynamic, ScenarioRegime::S2, 4, 11);
    cfg.task_count = 500;
    const auto a = run_simulation(cfg);
    const auto b = run_simulation(cfg);
    report("sim: conservation",
           a.arrivals == a.completions + a.drops + a.in_flight && a.arrivals == cfg.task_count);
    report("sim: determinism", trace_ndjson(a) == trace_ndjson(b));
  }

  out << (failures == 0 ? "selfcheck passed" : "selfcheck failed: " + std::to_string(failures))
      << "\n";
  return failures == 0;
}

}  // namespace edgesched::cli
