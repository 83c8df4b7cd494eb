#ifndef CCFL_ALLOCATION_HPP
#define CCFL_ALLOCATION_HPP

#include <vector>

namespace ccfl {

/// Decision variables of the latency problem.
struct Allocation {
  std::vector<double> device_powers;  // W, one per device
  double jam_power = 0.0;             // W, total over the band
  double local_accuracy = 0.5;        // eta, strictly inside (0, 1)

  friend bool operator==(const Allocation&, const Allocation&) = default;
};

}  // namespace ccfl

#endif  // CCFL_ALLOCATION_HPP
