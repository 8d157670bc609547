#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace cqa::cli {

enum class Format { Csv, Json };

const char* to_string(Format f);
Format parse_format(const std::string& text);

// Everything needed to rerun a command; args holds each flag's canonical
// text keyed by its long name without dashes.
struct RunConfig {
    std::string command;
    std::map<std::string, std::string> args;
    std::string output = "-";
    Format format = Format::Csv;
    int jobs = 1;

    bool operator==(const RunConfig& o) const {
        return command == o.command && args == o.args && format == o.format;
    }
};

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, std::string>> notes;  // extra header lines
};

std::string format_number(double x);  // 17 significant digits

void write_csv(std::ostream& out, const RunConfig& cfg, const Table& table);
void write_json(std::ostream& out, const RunConfig& cfg, const Table& table);

// Rebuilds the config from the '#' header of a CSV file.
RunConfig parse_csv_header(std::istream& in);

}  // namespace cqa::cli
