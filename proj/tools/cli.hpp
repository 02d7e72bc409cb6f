#pragma once

#include "qvn/device.hpp"

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qvn::cli {

// Thrown for anything the user can fix: bad keys, values or flags. Exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-converged optimization. Exit code 3.
class NotConverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// section -> key -> raw value
using Settings = std::map<std::string, std::map<std::string, std::string>>;

struct RunSpec {
    std::string command;
    Settings settings;
    std::string out;           // empty: stdout
    std::string format = "csv";

    DeviceConfig device() const;
    double number(const std::string& section, const std::string& key) const;
    double number(const std::string& section, const std::string& key, double fallback) const;
    bool has(const std::string& section, const std::string& key) const;
    std::string text(const std::string& section, const std::string& key, const std::string& fallback) const;
};

const std::vector<std::string>& commands();

// Defaults for every known key (reference device, 99.9% eta = 300 MHz pulse).
Settings default_settings();

// INI with [section] headers and key = value lines, or JSON emitted by this tool.
// Unknown sections and keys are errors naming the key and line.
Settings load_config(const std::string& path);
Settings parse_ini(std::istream& in, const std::string& origin = "<input>");
Settings parse_json_config(const std::string& text);

// Later entries win; keys are checked against the known set.
void merge_settings(Settings& base, const Settings& over, const std::string& origin);
// "section.key=value"
void apply_assignment(Settings& s, const std::string& assignment);

using Cell = std::variant<double, long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::map<std::string, Cell> summary;  // json only
};

struct RunResult {
    Table table;
    bool converged = true;
};

RunResult run(const RunSpec& spec);

std::string to_csv(const Table& t);
std::string to_json(const Table& t, const RunSpec& spec);
void emit_results(const RunResult& r, const RunSpec& spec);

// Full command-line entry point; returns the process exit code.
int main_entry(int argc, char** argv);

}  // namespace qvn::cli
