#include "memsim/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace memsim {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string traces_csv(const std::map<std::string, Trace>& traces) {
    if (traces.empty()) throw std::invalid_argument("traces_csv: no traces");
    const TimeGrid& grid = traces.begin()->second.grid;
    std::string out = "time_s";
    for (const auto& [id, tr] : traces) {
        if (!(tr.grid == grid))
            throw std::invalid_argument("traces_csv: traces on different grids");
        out += "," + id;
    }
    out += "\n";
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        out += format_double(grid.time_at(k));
        for (const auto& [id, tr] : traces) out += "," + format_double(tr.values[k]);
        out += "\n";
    }
    return out;
}

std::string learning_curve_csv(const std::vector<LearningCurvePoint>& points) {
    std::string out = "delta_t_s,dw_v\n";
    for (const auto& p : points)
        out += format_double(p.delta_t.value) + "," + format_double(p.dw) + "\n";
    return out;
}

std::string da_sweep_csv(const std::vector<DaSweepPoint>& points) {
    std::string out = "wiper,peak_v\n";
    for (const auto& p : points)
        out += format_double(p.wiper) + "," + format_double(p.peak_amplitude) + "\n";
    return out;
}

std::string conductance_csv(const ConductanceRun& run) {
    std::string out = "time_s,da_wiper,conductance_s,learning_v\n";
    const TimeGrid& grid = run.da_trace.grid;
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        out += format_double(grid.time_at(k));
        out += "," + format_double(run.da_trace.values[k]);
        out += "," + format_double(run.g_trace.values[k]);
        out += "," + format_double(run.pulse_trace.values[k]);
        out += "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace memsim
