#include <stdexcept>

#include "neseek/config.hpp"
#include "neseek/harness.hpp"

namespace neseek {

SweepResult sweep(const RunDocument& base, const std::string& axis,
                  const std::vector<std::string>& values, int jobs) {
  if (values.empty()) {
    throw std::invalid_argument("sweep: value list must not be empty");
  }
  SweepResult out;
  out.axis = axis;
  out.values = values;
  out.results.reserve(values.size());
  for (const auto& value : values) {
    const RunDocument doc = apply_axis(base, axis, value);
    ExperimentSpec spec = build_experiment(doc);
    spec.jobs = jobs;
    out.iters = spec.run.iters;
    out.results.push_back(run_experiment(spec));
  }
  return out;
}

}  // namespace neseek
