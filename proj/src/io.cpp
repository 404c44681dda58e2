#include "fhawkes/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fhawkes/errors.hpp"

namespace fhawkes {

void write_events_csv(const std::string& path, const EventLog& log) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << "time,mark\n";
    char buf[64];
    for (const Event& e : log.events) {
        std::snprintf(buf, sizeof(buf), "%.9f,%d\n", e.time, e.mark);
        out << buf;
    }
    if (!out) throw DataError("write failed: " + path);
}

EventLog read_events_csv(const std::string& path, double horizon, int dim) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open for reading: " + path);
    if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");

    EventLog log;
    log.horizon = horizon;
    std::string line;
    long line_no = 0;
    int max_mark = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != "time,mark") throw EventParseError("expected header 'time,mark'", line_no);
            continue;
        }
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw EventParseError("missing comma", line_no);
        double t;
        int mark;
        try {
            std::size_t used = 0;
            t = std::stod(line.substr(0, comma), &used);
            if (used != comma) throw EventParseError("bad time field", line_no);
            const std::string mark_str = line.substr(comma + 1);
            mark = std::stoi(mark_str, &used);
            if (used != mark_str.size()) throw EventParseError("bad mark field", line_no);
        } catch (const EventParseError&) {
            throw;
        } catch (const std::exception&) {
            throw EventParseError("unparseable row", line_no);
        }
        if (mark < 1) throw EventParseError("marks must be >= 1", line_no);
        if (!(t >= 0.0) || t >= horizon) throw EventParseError("time outside [0, horizon)", line_no);
        if (!log.events.empty() && t <= log.events.back().time) {
            throw EventParseError("times must be strictly increasing", line_no);
        }
        log.events.push_back(Event{t, mark});
        max_mark = std::max(max_mark, mark);
    }
    log.dim = dim > 0 ? dim : std::max(max_mark, 1);
    if (dim > 0 && max_mark > dim) throw DataError("event mark exceeds declared dimension");
    return log;
}

void write_manifest(const std::string& path, const nlohmann::json& manifest) {
    write_text_file(path, manifest.dump(2) + "\n");
}

nlohmann::json read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataError("malformed manifest " + path + ": " + e.what());
    }
    return j;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << content;
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace fhawkes
