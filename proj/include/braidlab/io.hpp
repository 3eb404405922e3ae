#ifndef BRAIDLAB_IO_HPP
#define BRAIDLAB_IO_HPP

#include <string>
#include <vector>

#include "braidlab/graph.hpp"

namespace braidlab {

/// Flows file: CSV "flow_id,size" with a header row.
void save_flows(const std::vector<i64>& flows, const std::string& path);
std::vector<i64> load_flows(const std::string& path);

/// Counters file: CSV "counter_id,value".
void save_counters(const std::vector<i64>& counters, const std::string& path);
std::vector<i64> load_counters(const std::string& path);

/// Trace file: newline-delimited flow ids.
void save_trace(const std::vector<i64>& trace, const std::string& path);
std::vector<i64> load_trace(const std::string& path);

/// Estimates file: CSV "flow_id,estimate,converged".
void save_estimates(const std::vector<i64>& estimates, const std::vector<std::uint8_t>& converged,
                    const std::string& path);

/// Numbers in CSV/JSON output: '.' decimal, 12 significant digits.
std::string format_number(double v);

}  // namespace braidlab

#endif
