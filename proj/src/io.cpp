#include "braidlab/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "braidlab/errors.hpp"

namespace braidlab {

namespace {

std::vector<std::pair<i64, i64>> load_two_column_csv(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw param_error(std::string("cannot open ") + path);
    std::vector<std::pair<i64, i64>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (!line.empty() && !(line[0] >= '0' && line[0] <= '9')) continue;  // header
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw param_error(std::string(what) + ": malformed CSV line: " + line);
        i64 a = 0, b = 0;
        auto r1 = std::from_chars(line.data(), line.data() + comma, a);
        auto r2 = std::from_chars(line.data() + comma + 1, line.data() + line.size(), b);
        if (r1.ec != std::errc{} || r2.ec != std::errc{})
            throw param_error(std::string(what) + ": malformed CSV line: " + line);
        rows.emplace_back(a, b);
    }
    return rows;
}

std::vector<i64> densify(const std::vector<std::pair<i64, i64>>& rows, const char* what) {
    i64 max_id = -1;
    for (const auto& [id, _] : rows) {
        if (id < 0) throw param_error(std::string(what) + ": negative id");
        max_id = std::max(max_id, id);
    }
    std::vector<i64> out(static_cast<std::size_t>(max_id + 1), 0);
    for (const auto& [id, v] : rows) out[static_cast<std::size_t>(id)] = v;
    return out;
}

}  // namespace

void save_flows(const std::vector<i64>& flows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw param_error("cannot open " + path + " for writing");
    out << "flow_id,size\n";
    for (std::size_t f = 0; f < flows.size(); ++f) out << f << ',' << flows[f] << '\n';
}

std::vector<i64> load_flows(const std::string& path) {
    return densify(load_two_column_csv(path, "flows"), "flows");
}

void save_counters(const std::vector<i64>& counters, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw param_error("cannot open " + path + " for writing");
    out << "counter_id,value\n";
    for (std::size_t c = 0; c < counters.size(); ++c) out << c << ',' << counters[c] << '\n';
}

std::vector<i64> load_counters(const std::string& path) {
    return densify(load_two_column_csv(path, "counters"), "counters");
}

void save_trace(const std::vector<i64>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw param_error("cannot open " + path + " for writing");
    for (i64 f : trace) out << f << '\n';
}

std::vector<i64> load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw param_error("cannot open " + path);
    std::vector<i64> trace;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        i64 v = 0;
        const auto r = std::from_chars(line.data(), line.data() + line.size(), v);
        if (r.ec != std::errc{}) throw param_error("trace: malformed line: " + line);
        trace.push_back(v);
    }
    return trace;
}

void save_estimates(const std::vector<i64>& estimates, const std::vector<std::uint8_t>& converged,
                    const std::string& path) {
    if (estimates.size() != converged.size()) throw param_error("estimates/converged size mismatch");
    std::ofstream out(path);
    if (!out) throw param_error("cannot open " + path + " for writing");
    out << "flow_id,estimate,converged\n";
    for (std::size_t f = 0; f < estimates.size(); ++f)
        out << f << ',' << estimates[f] << ',' << static_cast<int>(converged[f]) << '\n';
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace braidlab
