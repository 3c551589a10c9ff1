#pragma once

// Integer-program formulation of the maximum-arc problem: one binary
// variable per cell, one row per line capping its members at two, objective
// the number of selected cells. Feasible 0/1 points are exactly the arcs.

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "arcs/geometry.hpp"
#include "arcs/modular.hpp"

namespace arcs {

struct IlpModel {
    int n = 2;
    std::vector<std::string> variables;     // one per cell, row-major order
    std::vector<std::vector<int>> rows;     // line id -> member cells, sorted
};

inline std::string cell_variable(int cell, int n) {
    return "x_" + std::to_string(cell % n) + "_" + std::to_string(cell / n);
}

inline IlpModel build_model(const Modulus& m) {
    LineTable table(m);
    int n = m.value();
    IlpModel model;
    model.n = n;
    model.variables.reserve(n * n);
    for (int c = 0; c < n * n; ++c) model.variables.push_back(cell_variable(c, n));
    model.rows.reserve(table.line_count());
    for (int id = 0; id < table.line_count(); ++id) model.rows.push_back(table.line(id).cells);
    return model;
}

/// True iff the cell subset satisfies every row (at most two per line).
inline bool model_feasible(const IlpModel& model, const std::vector<char>& selected) {
    for (const auto& row : model.rows) {
        int sum = 0;
        for (int c : row)
            if (selected[c] && ++sum > 2) return false;
    }
    return true;
}

namespace detail {

inline void write_terms(std::ostream& out, const std::string& head,
                        const std::vector<int>& cells, int n, const std::string& tail) {
    std::string line = head;
    bool first = true;
    for (int c : cells) {
        std::string term = (first ? "" : " + ") + cell_variable(c, n);
        if (line.size() + term.size() > 200) {
            out << line << "\n";
            line = "    ";
            term = "+ " + cell_variable(c, n);
        }
        line += term;
        first = false;
    }
    out << line << tail << "\n";
}

} // namespace detail

/// CPLEX-LP text, byte-stable across runs.
inline void write_lp(const IlpModel& model, std::ostream& out) {
    int n = model.n;
    std::vector<int> all_cells(n * n);
    for (int c = 0; c < n * n; ++c) all_cells[c] = c;
    out << "Maximize\n";
    detail::write_terms(out, " obj: ", all_cells, n, "");
    out << "Subject To\n";
    for (size_t i = 0; i < model.rows.size(); ++i)
        detail::write_terms(out, " l" + std::to_string(i) + ": ", model.rows[i], n, " <= 2");
    out << "Binaries\n";
    for (const std::string& v : model.variables) out << " " << v << "\n";
    out << "End\n";
    if (!out) throw io_failure("LP write failed");
}

inline std::string lp_string(const IlpModel& model) {
    std::ostringstream ss;
    write_lp(model, ss);
    return ss.str();
}

} // namespace arcs
