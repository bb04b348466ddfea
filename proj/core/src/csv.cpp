#include "ectdim/csv.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ectdim::csv {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

double parse_double(const std::string& token) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{}) {
        throw std::invalid_argument("malformed number '" + token + "'");
    }
    while (ptr != last && (*ptr == ' ' || *ptr == '\t' || *ptr == '\r')) ++ptr;
    if (ptr != last) throw std::invalid_argument("trailing junk in number '" + token + "'");
    return v;
}

void Writer::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) content_ += ',';
        content_ += cells[i];
    }
    content_ += '\n';
}

void Writer::row_values(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) content_ += ',';
        content_ += format_double(values[i]);
    }
    content_ += '\n';
}

void Writer::save(const std::string& path) const { write_text_atomic(path, content_); }

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw std::invalid_argument("CSV is missing column '" + name + "'");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

}  // namespace

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file '" + path + "'");
    Table table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        if (first) {
            table.header = split_line(line);
            first = false;
        } else {
            table.rows.push_back(split_line(line));
        }
    }
    if (first) throw std::runtime_error("empty CSV file '" + path + "'");
    return table;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("short write to '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace ectdim::csv
