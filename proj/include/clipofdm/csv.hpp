#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace clipofdm {

/// Locale-independent number formatting: shortest round-trip representation,
/// '.' decimal, "nan"/"inf" for non-finite values.
std::string format_number(double v);

/// Accumulates a CSV table in memory. Rows end with '\n'.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    class Row {
    public:
        Row& add(double v);
        Row& add(std::string_view text);
        Row& add(long long v);

    private:
        friend class CsvTable;
        std::vector<std::string> cells_;
    };

    void push(const Row& row);
    std::size_t rows() const { return rows_; }
    const std::string& text() const { return text_; }

private:
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string text_;
};

} // namespace clipofdm
