#include "relscan/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "relscan/errors.hpp"

namespace relscan {

namespace {

std::string trimmed(const std::string& line) {
    const char* ws = " \t\r\n";
    const auto a = line.find_first_not_of(ws);
    if (a == std::string::npos) return {};
    const auto b = line.find_last_not_of(ws);
    return line.substr(a, b - a + 1);
}

}  // namespace

TimeSeries read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open input file: " + path.string());
    TimeSeries values;
    std::string line;
    std::size_t row = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++row;
        const std::string cell = trimmed(line);
        if (cell.empty()) {
            // Tolerate a single trailing blank line; blank rows elsewhere are errors.
            if (in.peek() == std::ifstream::traits_type::eof()) break;
            throw invalid_input("row " + std::to_string(row) + ": empty row");
        }
        if (!saw_data && row == 1 && cell == "value") continue;
        double v = 0.0;
        const char* first = cell.data();
        const char* last = first + cell.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last)
            throw invalid_input("row " + std::to_string(row) + ": not a number: " + cell);
        if (!std::isfinite(v))
            throw invalid_input("row " + std::to_string(row) + ": non-finite value");
        values.push_back(v);
        saw_data = true;
    }
    if (values.empty()) throw invalid_input("input file has no data rows: " + path.string());
    return values;
}

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw invalid_input("cannot open output file: " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw invalid_input("failed writing output file: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw invalid_input("failed to move output into place: " + path.string());
    }
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

}  // namespace relscan
