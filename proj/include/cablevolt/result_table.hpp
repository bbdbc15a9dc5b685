#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace cablevolt {

struct Column {
    std::string name;
    std::string unit;  ///< "-" for dimensionless
};

/// Rectangular table of numbers with named, unit-tagged columns.
///
/// CSV layout:
///   # <title>
///   name[unit],name[unit],...
///   <rows>
///   # key=value         (provenance, one line per entry)
/// Several tables in one stream are separated by a blank line.
class ResultTable {
public:
    ResultTable() = default;
    ResultTable(std::string title, std::vector<Column> columns);

    void add_row(std::vector<double> row);
    void add_provenance(std::string key, std::string value);

    [[nodiscard]] const std::string& title() const { return title_; }
    [[nodiscard]] const std::vector<Column>& columns() const { return columns_; }
    [[nodiscard]] const std::vector<std::vector<double>>& rows() const { return rows_; }
    [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& provenance() const {
        return provenance_;
    }
    [[nodiscard]] std::size_t column_index(const std::string& name) const;
    [[nodiscard]] double at(std::size_t row, const std::string& column) const;
    [[nodiscard]] bool has_non_finite() const;

    void write_csv(std::ostream& out) const;
    [[nodiscard]] nlohmann::json to_json() const;

    static ResultTable from_json(const nlohmann::json& doc);

private:
    std::string title_;
    std::vector<Column> columns_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::pair<std::string, std::string>> provenance_;
};

/// Shortest decimal form that parses back to the same double.
std::string format_number(double x);

void write_tables_csv(std::ostream& out, std::span<const ResultTable> tables);
nlohmann::json tables_to_json(std::span<const ResultTable> tables);

std::vector<ResultTable> read_tables_csv(std::istream& in);
std::vector<ResultTable> tables_from_json(const nlohmann::json& doc);

}  // namespace cablevolt
