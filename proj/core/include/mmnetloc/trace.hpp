#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace mmnetloc {

// One per-iteration record. cost_z is present for the majorization solver
// (whose monotonicity it witnesses) and absent for methods that never form
// the lifted variable. mpe is present when true positions are known.
struct TracePoint {
  int iter = 0;
  double cost_per_sensor = 0.0;
  std::optional<double> cost_z;
  std::int64_t comm_scalars = 0;
  std::optional<double> mpe;
};

using RunTrace = std::vector<TracePoint>;

// Columns: iter,comm_scalars,cost_per_sensor,cost_z,mpe. Optional fields
// render as empty cells. Floats carry 17 significant digits.
void write_trace_csv(std::ostream& os, const RunTrace& trace);

}  // namespace mmnetloc
