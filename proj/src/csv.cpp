#include "clipofdm/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace clipofdm {

std::string format_number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (v == 0.0) {
        return "0";  // folds -0
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size())
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        text_ += (i ? "," : "") + header[i];
    }
    text_ += '\n';
}

CsvTable::Row& CsvTable::Row::add(double v)
{
    cells_.push_back(format_number(v));
    return *this;
}

CsvTable::Row& CsvTable::Row::add(std::string_view text)
{
    cells_.emplace_back(text);
    return *this;
}

CsvTable::Row& CsvTable::Row::add(long long v)
{
    cells_.push_back(std::to_string(v));
    return *this;
}

void CsvTable::push(const Row& row)
{
    if (row.cells_.size() != columns_) {
        throw std::logic_error("CsvTable: row width does not match header");
    }
    for (std::size_t i = 0; i < row.cells_.size(); ++i) {
        text_ += (i ? "," : "") + row.cells_[i];
    }
    text_ += '\n';
    ++rows_;
}

} // namespace clipofdm
