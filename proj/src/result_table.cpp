#include "cablevolt/result_table.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "cablevolt/errors.hpp"

namespace cablevolt {

using nlohmann::json;

namespace {

double parse_number(std::string_view text) {
    if (text == "nan") {
        return std::nan("");
    }
    if (text == "inf") {
        return INFINITY;
    }
    if (text == "-inf") {
        return -INFINITY;
    }
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("bad number '" + std::string(text) + "' in table");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

Column parse_header_cell(std::string_view cell) {
    const auto open = cell.find('[');
    if (open == std::string_view::npos || cell.back() != ']') {
        throw ConfigError("table header cell '" + std::string(cell) + "' lacks a [unit]");
    }
    return {std::string(cell.substr(0, open)), std::string(cell.substr(open + 1, cell.size() - open - 2))};
}

json number_to_json(double x) {
    if (std::isfinite(x)) {
        return x;
    }
    return format_number(x);
}

double number_from_json(const json& v) {
    if (v.is_number()) {
        return v.get<double>();
    }
    return parse_number(v.get<std::string>());
}

}  // namespace

std::string format_number(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, ptr};
}

ResultTable::ResultTable(std::string title, std::vector<Column> columns)
    : title_(std::move(title)), columns_(std::move(columns)) {}

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns_.size()) {
        throw std::logic_error("row width " + std::to_string(row.size()) + " does not match " +
                               std::to_string(columns_.size()) + " columns");
    }
    rows_.push_back(std::move(row));
}

void ResultTable::add_provenance(std::string key, std::string value) {
    provenance_.emplace_back(std::move(key), std::move(value));
}

std::size_t ResultTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name == name) {
            return i;
        }
    }
    throw std::out_of_range("no column '" + name + "'");
}

double ResultTable::at(std::size_t row, const std::string& column) const {
    return rows_.at(row).at(column_index(column));
}

bool ResultTable::has_non_finite() const {
    for (const auto& row : rows_) {
        for (const double x : row) {
            if (!std::isfinite(x)) {
                return true;
            }
        }
    }
    return false;
}

void ResultTable::write_csv(std::ostream& out) const {
    out << "# " << title_ << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        out << (i == 0 ? "" : ",") << columns_[i].name << '[' << columns_[i].unit << ']';
    }
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i == 0 ? "" : ",") << format_number(row[i]);
        }
        out << '\n';
    }
    for (const auto& [key, value] : provenance_) {
        out << "# " << key << '=' << value << '\n';
    }
}

json ResultTable::to_json() const {
    json cols = json::array();
    for (const Column& c : columns_) {
        cols.push_back({{"name", c.name}, {"unit", c.unit}});
    }
    json rows = json::array();
    for (const auto& row : rows_) {
        json r = json::array();
        for (const double x : row) {
            r.push_back(number_to_json(x));
        }
        rows.push_back(std::move(r));
    }
    json prov = json::object();
    for (const auto& [key, value] : provenance_) {
        prov[key] = value;
    }
    return {{"title", title_}, {"columns", cols}, {"rows", rows}, {"provenance", prov}};
}

ResultTable ResultTable::from_json(const json& doc) {
    try {
        std::vector<Column> cols;
        for (const json& c : doc.at("columns")) {
            cols.push_back({c.at("name").get<std::string>(), c.at("unit").get<std::string>()});
        }
        ResultTable t(doc.at("title").get<std::string>(), std::move(cols));
        for (const json& r : doc.at("rows")) {
            std::vector<double> row;
            for (const json& x : r) {
                row.push_back(number_from_json(x));
            }
            t.add_row(std::move(row));
        }
        for (const auto& [key, value] : doc.at("provenance").items()) {
            t.add_provenance(key, value.get<std::string>());
        }
        return t;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed table JSON: ") + e.what());
    }
}

void write_tables_csv(std::ostream& out, std::span<const ResultTable> tables) {
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i > 0) {
            out << '\n';
        }
        tables[i].write_csv(out);
    }
}

json tables_to_json(std::span<const ResultTable> tables) {
    json out = json::array();
    for (const ResultTable& t : tables) {
        out.push_back(t.to_json());
    }
    return {{"tables", out}};
}

std::vector<ResultTable> read_tables_csv(std::istream& in) {
    std::vector<ResultTable> out;
    std::string line;
    // 0: expecting title, 1: expecting header, 2: rows/provenance
    int state = 0;
    std::string title;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            if (state == 1) {
                throw ConfigError("table '" + title + "' has no header");
            }
            state = 0;
            continue;
        }
        if (state == 0) {
            if (line.rfind("# ", 0) != 0) {
                throw ConfigError("table must start with a '# title' line");
            }
            title = line.substr(2);
            state = 1;
        } else if (state == 1) {
            std::vector<Column> cols;
            for (const auto cell : split(line, ',')) {
                cols.push_back(parse_header_cell(cell));
            }
            out.emplace_back(title, std::move(cols));
            state = 2;
        } else if (line.rfind("# ", 0) == 0) {
            const std::string entry = line.substr(2);
            const auto eq = entry.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("malformed provenance line '" + line + "'");
            }
            out.back().add_provenance(entry.substr(0, eq), entry.substr(eq + 1));
        } else {
            std::vector<double> row;
            for (const auto cell : split(line, ',')) {
                row.push_back(parse_number(cell));
            }
            if (row.size() != out.back().columns().size()) {
                throw ConfigError("ragged row in table '" + title + "'");
            }
            out.back().add_row(std::move(row));
        }
    }
    if (state == 1) {
        throw ConfigError("table '" + title + "' has no header");
    }
    return out;
}

std::vector<ResultTable> tables_from_json(const json& doc) {
    std::vector<ResultTable> out;
    for (const json& t : doc.at("tables")) {
        out.push_back(ResultTable::from_json(t));
    }
    return out;
}

}  // namespace cablevolt
