#pragma once

#include <string>
#include <vector>

namespace ectdim::csv {

/// Shortest round-trip decimal form of a double ("1650", "2.69e-03" style),
/// C locale, never a comma decimal separator.
std::string format_double(double v);

double parse_double(const std::string& token);

/// Minimal CSV writer: comma separated, LF line endings, UTF-8 passthrough.
/// Files are written atomically (temp + rename).
class Writer {
public:
    void row(const std::vector<std::string>& cells);
    void row_values(const std::vector<double>& values);
    void save(const std::string& path) const;
    const std::string& content() const { return content_; }

private:
    std::string content_;
};

/// Reads a whole CSV file: first line is the header. Cells are not unescaped
/// (the formats in this project never quote).
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by header name; throws std::invalid_argument if absent.
    std::size_t column(const std::string& name) const;
};

Table read_table(const std::string& path);

void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace ectdim::csv
