#include "aqrm_cli/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace aqrm::cli {

std::string format_number(double x)
{
    if (x == 0.0)
        return "0";
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
    if (ec != std::errc())
        throw std::runtime_error("number formatting failed");
    return std::string(buf, end);
}

double rounded(double x)
{
    if (!std::isfinite(x) || x == 0.0)
        return x == 0.0 ? 0.0 : x;
    const std::string s = format_number(x);
    double v = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& values)
{
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values)
        cells.push_back(format_number(v));
    add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& cells)
{
    if (cells.size() != header_.size())
        throw std::logic_error("csv row width does not match header");
    rows_.push_back(cells);
}

std::string CsvTable::str() const
{
    std::string s;
    auto line = [&s](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                s += ',';
            s += cells[i];
        }
        s += '\n';
    };
    line(header_);
    for (const auto& r : rows_)
        line(r);
    return s;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        out.flush();
        return;
    }
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << text;
        if (!f.flush())
            throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, target);
}

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

} // namespace aqrm::cli
