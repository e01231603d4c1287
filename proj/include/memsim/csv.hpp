#pragma once

#include <map>
#include <string>
#include <vector>

#include "memsim/experiments.hpp"
#include "memsim/signal.hpp"

namespace memsim {

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double v);

/// Header `time_s,<id>,...` with ids in lexicographic order; all traces
/// must share one grid. Byte-deterministic.
std::string traces_csv(const std::map<std::string, Trace>& traces);

/// Header `delta_t_s,dw_v`, rows in input order.
std::string learning_curve_csv(const std::vector<LearningCurvePoint>& points);

/// Header `wiper,peak_v`, rows in input order.
std::string da_sweep_csv(const std::vector<DaSweepPoint>& points);

/// Header `time_s,da_wiper,conductance_s,learning_v`.
std::string conductance_csv(const ConductanceRun& run);

/// Write atomically enough for tests: throws std::runtime_error with the
/// path on failure.
void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

} // namespace memsim
