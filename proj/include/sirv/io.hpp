#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sirv/errors.hpp"
#include "sirv/grid.hpp"

namespace sirv {

/// Spatial snapshot: one text header line "nx1 nx2 time_index float64",
/// then nx1*nx2 native-endian doubles in row-major order.
inline void write_snapshot(const std::filesystem::path& path, int nx1, int nx2, int time_index,
                           const std::vector<double>& data) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_snapshot: cannot open " + path.string());
    os << nx1 << " " << nx2 << " " << time_index << " float64\n";
    os.write(reinterpret_cast<const char*>(data.data()),
             static_cast<std::streamsize>(data.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write_snapshot: write failed for " + path.string());
}

struct Snapshot {
    int nx1 = 0;
    int nx2 = 0;
    int time_index = 0;
    std::vector<double> data;
};

inline Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_snapshot: cannot open " + path.string());
    Snapshot s;
    std::string header, dtype;
    std::getline(is, header);
    std::istringstream hs(header);
    if (!(hs >> s.nx1 >> s.nx2 >> s.time_index >> dtype) || dtype != "float64")
        throw std::runtime_error("read_snapshot: bad header in " + path.string());
    s.data.resize(static_cast<std::size_t>(s.nx1) * s.nx2);
    is.read(reinterpret_cast<char*>(s.data.data()),
            static_cast<std::streamsize>(s.data.size() * sizeof(double)));
    if (!is) throw std::runtime_error("read_snapshot: truncated data in " + path.string());
    return s;
}

/// Minimal csv writer: one header row, then data rows.
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path) : os_(path) {
        if (!os_) throw std::runtime_error("csv: cannot open " + path.string());
        os_.precision(17);
    }

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) os_ << (i ? "," : "") << cols[i];
        os_ << "\n";
    }

    template <typename T>
    void row(const std::vector<T>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) os_ << (i ? "," : "") << vals[i];
        os_ << "\n";
    }

private:
    std::ofstream os_;
};

/// Flat key = value store used for run reports, written sorted for stability.
struct KeyValueFile {
    std::map<std::string, std::string> entries;

    void set(const std::string& key, double value) {
        std::ostringstream ss;
        ss.precision(17);
        ss << value;
        entries[key] = ss.str();
    }
    void set(const std::string& key, const std::string& value) { entries[key] = value; }

    double get_num(const std::string& key) const {
        auto it = entries.find(key);
        if (it == entries.end()) throw std::runtime_error("report: missing key " + key);
        return std::stod(it->second);
    }
    bool has(const std::string& key) const { return entries.count(key) != 0; }

    void write(const std::filesystem::path& path) const {
        std::ofstream os(path);
        if (!os) throw std::runtime_error("report: cannot open " + path.string());
        for (const auto& [k, v] : entries) os << k << " = " << v << "\n";
    }

    static KeyValueFile read(const std::filesystem::path& path) {
        std::ifstream is(path);
        if (!is) throw std::runtime_error("report: cannot open " + path.string());
        KeyValueFile kv;
        std::string line;
        while (std::getline(is, line)) {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            kv.entries[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        return kv;
    }
};

} // namespace sirv
