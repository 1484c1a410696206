// io.hpp
//
// Constants files (JSON) and plain numeric tables (CSV, 17 digits).
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "tfstar/constants.hpp"

namespace tfstar {

/// Reads {"h","c","G","q","m_e","m_p"} with optional "k_e","k_p". If h is
/// absent it is derived from k_e; missing prefactors are derived from h.
/// Throws SolverError(Io) for unreadable files or missing keys and
/// SolverError(InadmissibleConstants) for invalid values.
ConstantSet load_constants(const std::string& path);
ConstantSet constants_from_json(const nlohmann::json& j);
nlohmann::json constants_to_json(const ConstantSet& c);

/// Formats with 17 significant digits, "." as decimal separator.
std::string format_number(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    void add_numbers(const std::vector<double>& row);
};

void write_table(const Table& t, const std::string& path);

}  // namespace tfstar
