#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

namespace aqrm::cli {

using Json = nlohmann::ordered_json;

// Shortest "%.12g"-equivalent, locale independent; -0 prints as 0.
std::string format_number(double x);

// x rounded to 12 significant digits, so JSON dumps match the CSV text.
double rounded(double x);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(const std::vector<double>& values);
    // mixed rows: text cells are emitted verbatim
    void add_row(const std::vector<std::string>& cells);
    std::size_t rows() const { return rows_.size(); }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// "-" writes to `out`; anything else goes through a temp file and rename.
void write_output(const std::string& path, const std::string& text, std::ostream& out);

std::string dump(const Json& j);

} // namespace aqrm::cli
