#include "tfstar/io.hpp"

#include <cstdio>
#include <fstream>

#include "tfstar/error.hpp"

namespace tfstar {

namespace {

double get_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw SolverError(ErrorCode::Io, std::string("constants file lacks \"") + key + "\"");
    if (!j[key].is_number()) throw SolverError(ErrorCode::Io, std::string("constant \"") + key + "\" is not a number");
    return j[key].get<double>();
}

}  // namespace

ConstantSet constants_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SolverError(ErrorCode::Io, "constants must be a JSON object");
    ConstantSet c;
    c.c = get_number(j, "c");
    c.G = get_number(j, "G");
    c.q = get_number(j, "q");
    c.m_e = get_number(j, "m_e");
    c.m_p = get_number(j, "m_p");
    const bool has_ke = j.contains("k_e"), has_kp = j.contains("k_p");
    if (j.contains("h")) {
        c.h = get_number(j, "h");
    } else if (has_ke) {
        c.h = planck_from_prefactor(get_number(j, "k_e"), c.m_e);
    } else {
        throw SolverError(ErrorCode::Io, "constants file needs \"h\" or \"k_e\"");
    }
    c.k_e = has_ke ? get_number(j, "k_e") : kinetic_prefactor(c.h, c.m_e);
    c.k_p = has_kp ? get_number(j, "k_p") : kinetic_prefactor(c.h, c.m_p);
    c.validate();
    return c;
}

ConstantSet load_constants(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SolverError(ErrorCode::Io, "cannot open constants file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SolverError(ErrorCode::Io, "bad JSON in " + path + ": " + e.what());
    }
    return constants_from_json(j);
}

nlohmann::json constants_to_json(const ConstantSet& c) {
    return {{"h", c.h}, {"c", c.c}, {"G", c.G}, {"q", c.q}, {"m_e", c.m_e},
            {"m_p", c.m_p}, {"k_e", c.k_e}, {"k_p", c.k_p}};
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Table::add_numbers(const std::vector<double>& row) {
    std::vector<std::string> out;
    out.reserve(row.size());
    for (double v : row) out.push_back(format_number(v));
    rows.push_back(std::move(out));
}

void write_table(const Table& t, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw SolverError(ErrorCode::Io, "cannot write " + path);
    auto line = [f](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            std::fputs(cells[i].c_str(), f);
            std::fputc(i + 1 < cells.size() ? ',' : '\n', f);
        }
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    if (std::fclose(f) != 0) throw SolverError(ErrorCode::Io, "error closing " + path);
}

}  // namespace tfstar
