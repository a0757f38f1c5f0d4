#include "ddpf/grid.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ddpf {

char cell_char(CellKind kind) {
    switch (kind) {
        case CellKind::Wall: return '#';
        case CellKind::Free: return '.';
        case CellKind::Origin: return 'O';
        case CellKind::Destination: return 'D';
        case CellKind::Measurement: return 'M';
    }
    return '?';
}

namespace {

bool kind_of_char(char c, CellKind& out) {
    switch (c) {
        case '#': out = CellKind::Wall; return true;
        case '.': out = CellKind::Free; return true;
        case 'O': out = CellKind::Origin; return true;
        case 'D': out = CellKind::Destination; return true;
        case 'M': out = CellKind::Measurement; return true;
        default: return false;
    }
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

} // namespace

std::vector<int> Grid::cells_of(CellKind kind) const {
    std::vector<int> out;
    for (int i = 0; i < width * height; ++i) {
        if (cells[static_cast<std::size_t>(i)] == kind) out.push_back(i);
    }
    return out;
}

int Grid::count_of(CellKind kind) const {
    return static_cast<int>(
        std::count(cells.begin(), cells.end(), kind));
}

int Occupancy::count() const {
    return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1));
}

Grid parse_scenario(std::istream& in) {
    Grid grid;
    bool have_cellsize = false;
    std::vector<std::string> rows;
    bool in_map = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        strip_cr(line);

        if (!in_map) {
            if (line.empty()) continue; // blank lines before the map are ignored
            if (line[0] == '@') {
                std::istringstream hdr(line);
                std::string key;
                hdr >> key;
                if (key == "@cellsize") {
                    double v = 0.0;
                    if (!(hdr >> v) || !(v > 0.0)) {
                        throw std::runtime_error(
                            "scenario line " + std::to_string(line_no) +
                            ": @cellsize requires a positive number");
                    }
                    grid.cell_size = v;
                    have_cellsize = true;
                } else if (key == "@name") {
                    std::string rest;
                    std::getline(hdr, rest);
                    std::size_t start = rest.find_first_not_of(" \t");
                    grid.name = (start == std::string::npos) ? "" : rest.substr(start);
                } else {
                    throw std::runtime_error(
                        "scenario line " + std::to_string(line_no) +
                        ": unknown header '" + key + "'");
                }
                continue;
            }
            in_map = true; // first non-header line starts the map
        }
        rows.push_back(line);
    }

    if (!have_cellsize) {
        throw std::runtime_error("scenario: missing required @cellsize header");
    }

    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.size());
    if (rows.empty() || width == 0) {
        throw std::runtime_error("scenario: map has zero width or height");
    }

    grid.width = static_cast<int>(width);
    grid.height = static_cast<int>(rows.size());
    grid.cells.assign(static_cast<std::size_t>(grid.width) * grid.height,
                      CellKind::Wall); // short rows pad with Wall

    for (int y = 0; y < grid.height; ++y) {
        const std::string& row = rows[static_cast<std::size_t>(y)];
        for (int x = 0; x < static_cast<int>(row.size()); ++x) {
            CellKind kind;
            if (!kind_of_char(row[static_cast<std::size_t>(x)], kind)) {
                throw std::runtime_error(
                    "scenario: unknown map character '" +
                    std::string(1, row[static_cast<std::size_t>(x)]) +
                    "' at row " + std::to_string(y) + ", column " + std::to_string(x));
            }
            grid.set(x, y, kind);
        }
    }
    return grid;
}

Grid parse_scenario(const std::string& text) {
    std::istringstream in(text);
    return parse_scenario(in);
}

Grid load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open scenario file: " + path);
    }
    return parse_scenario(in);
}

std::string serialize_scenario(const Grid& grid) {
    std::string out;
    if (!grid.name.empty()) {
        out += "@name " + grid.name + "\n";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "@cellsize %.12g\n", grid.cell_size);
    out += buf;
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) {
            out += cell_char(grid.at(x, y));
        }
        out += '\n';
    }
    return out;
}

} // namespace ddpf
