#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace cqa::cli {
namespace {

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out + "\"";
}

std::string csv_cell(const Cell& c) {
    if (const double* x = std::get_if<double>(&c)) return format_number(*x);
    return std::get<std::string>(c);
}

std::string json_cell(const Cell& c) {
    if (const double* x = std::get_if<double>(&c)) return std::isfinite(*x) ? format_number(*x) : "null";
    return json_string(std::get<std::string>(c));
}

}  // namespace

const char* to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

Format parse_format(const std::string& text) {
    if (text == "csv") return Format::Csv;
    if (text == "json") return Format::Json;
    throw std::invalid_argument("unknown format '" + text + "'");
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(std::ostream& out, const RunConfig& cfg, const Table& table) {
    out << "# cqa-fermi " << CQA_FERMI_VERSION << '\n';
    out << "# git " << CQA_FERMI_GIT_HASH << '\n';
    out << "# command " << cfg.command << '\n';
    for (const auto& [k, v] : cfg.args) out << "# arg." << k << ' ' << v << '\n';
    for (const auto& [k, v] : table.notes) out << "# " << k << ' ' << v << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
        out << '\n';
    }
}

void write_json(std::ostream& out, const RunConfig& cfg, const Table& table) {
    out << "{\n  \"version\": " << json_string(CQA_FERMI_VERSION) << ",\n";
    out << "  \"git\": " << json_string(CQA_FERMI_GIT_HASH) << ",\n";
    out << "  \"command\": " << json_string(cfg.command) << ",\n  \"args\": {";
    bool first = true;
    for (const auto& [k, v] : cfg.args) {
        out << (first ? "\n    " : ",\n    ") << json_string(k) << ": " << json_string(v);
        first = false;
    }
    out << (first ? "},\n" : "\n  },\n") << "  \"notes\": {";
    first = true;
    for (const auto& [k, v] : table.notes) {
        out << (first ? "\n    " : ",\n    ") << json_string(k) << ": " << json_string(v);
        first = false;
    }
    out << (first ? "},\n" : "\n  },\n") << "  \"columns\": [";
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? ", " : "") << json_string(table.columns[i]);
    out << "],\n  \"rows\": [";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << (r ? ",\n    {" : "\n    {");
        for (std::size_t i = 0; i < table.rows[r].size(); ++i)
            out << (i ? ", " : "") << json_string(table.columns[i]) << ": " << json_cell(table.rows[r][i]);
        out << '}';
    }
    out << (table.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

RunConfig parse_csv_header(std::istream& in) {
    RunConfig cfg;
    cfg.format = Format::Csv;
    std::string line;
    bool seen_command = false;
    while (in.peek() == '#' && std::getline(in, line)) {
        const std::string body = line.substr(line.size() > 1 ? 2 : 1);
        const auto space = body.find(' ');
        const std::string key = body.substr(0, space);
        const std::string value = space == std::string::npos ? "" : body.substr(space + 1);
        if (key == "command") {
            cfg.command = value;
            seen_command = true;
        } else if (key.rfind("arg.", 0) == 0) {
            cfg.args[key.substr(4)] = value;
        }
    }
    if (!seen_command) throw std::runtime_error("header has no command line");
    return cfg;
}

}  // namespace cqa::cli
