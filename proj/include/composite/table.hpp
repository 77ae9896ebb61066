#pragma once

// Figure-ready tables and their CSV / JSON serializations.
//
// Output is a pure function of the table contents: numbers are printed with
// 12 significant digits and metadata carries no timestamps.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace composite {

using Cell = std::variant<std::monostate, double, std::string, bool>;

struct FigureTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size()) {
            throw std::logic_error("FigureTable: row arity " + std::to_string(row.size()) +
                                   " does not match " + std::to_string(columns.size()) + " columns");
        }
        rows.push_back(std::move(row));
    }

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) return i;
        }
        throw std::out_of_range("FigureTable: no column " + std::string(name));
    }
};

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return buf;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string cell_text(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
    };
    return std::visit(Visitor{}, c);
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(double v) const {
            // Round-trip through the CSV text so both formats carry the same digits.
            if (!std::isfinite(v)) return nullptr;
            return std::stod(format_number(v));
        }
        nlohmann::ordered_json operator()(const std::string& s) const { return s; }
        nlohmann::ordered_json operator()(bool b) const { return b; }
    };
    return std::visit(Visitor{}, c);
}

}  // namespace detail

/// RFC 4180 CSV: header row, CRLF line ends, quoting only where needed.
inline void write_csv(std::ostream& os, const FigureTable& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) os << ',';
        os << detail::csv_field(t.columns[i]);
    }
    os << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << detail::csv_field(detail::cell_text(row[i]));
        }
        os << "\r\n";
    }
}

inline nlohmann::ordered_json to_json(const FigureTable& t) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    j["columns"] = t.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& c : row) r.push_back(detail::cell_json(c));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    j["metadata"] = t.metadata;
    return j;
}

inline void write_json(std::ostream& os, const FigureTable& t) { os << to_json(t).dump(2) << '\n'; }

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_hex(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace composite
