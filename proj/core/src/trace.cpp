#include "mmnetloc/trace.hpp"

#include "mmnetloc/network_io.hpp"

namespace mmnetloc {

void write_trace_csv(std::ostream& os, const RunTrace& trace) {
  os << "iter,comm_scalars,cost_per_sensor,cost_z,mpe\n";
  for (const TracePoint& pt : trace) {
    os << pt.iter << ',' << pt.comm_scalars << ',' << format_double(pt.cost_per_sensor)
       << ',';
    if (pt.cost_z) os << format_double(*pt.cost_z);
    os << ',';
    if (pt.mpe) os << format_double(*pt.mpe);
    os << '\n';
  }
}

}  // namespace mmnetloc
