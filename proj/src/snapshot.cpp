#include "epadm/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "epadm/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

namespace epadm {

void write_snapshot(const std::string& path, const std::string& name,
                    const Field& field) {
    const Grid& g = field.grid();
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ConfigError("write_snapshot: cannot open " + tmp);
        out << "EPADM1\n";
        out << "name " << name << "\n";
        out << "dim " << g.dim() << "\n";
        out << "points";
        for (int a = 0; a < g.dim(); ++a) out << " " << g.points(a);
        out << "\nextent";
        out.precision(17);
        for (int a = 0; a < g.dim(); ++a) out << " " << g.extent(a);
        out << "\ncomponents " << field.ncomp() << "\n";
        out << "data\n";
        const auto raw = field.raw();
        out.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(raw.size() * sizeof(double)));
        if (!out) throw ConfigError("write_snapshot: write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("read_snapshot: cannot open " + path);

    std::string line;
    if (!std::getline(in, line) || line != "EPADM1") {
        throw ConfigError("read_snapshot: bad magic in " + path);
    }
    std::string name;
    int dim = 0, ncomp = 0;
    std::array<int, 3> points{1, 1, 1};
    std::array<double, 3> extent{1.0, 1.0, 1.0};
    bool saw_data = false;
    while (std::getline(in, line)) {
        if (line == "data") {
            saw_data = true;
            break;
        }
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "name") {
            ls >> name;
        } else if (key == "dim") {
            ls >> dim;
            if (dim < 1 || dim > 3) {
                throw ConfigError("read_snapshot: bad dim in " + path);
            }
        } else if (key == "points") {
            for (int a = 0; a < dim; ++a) ls >> points[a];
        } else if (key == "extent") {
            for (int a = 0; a < dim; ++a) ls >> extent[a];
        } else if (key == "components") {
            ls >> ncomp;
        } else {
            throw ConfigError("read_snapshot: unknown header key '" + key +
                              "' in " + path);
        }
        if (ls.fail()) {
            throw ConfigError("read_snapshot: malformed header line '" + line +
                              "' in " + path);
        }
    }
    if (!saw_data || dim == 0 || ncomp == 0) {
        throw ConfigError("read_snapshot: incomplete header in " + path);
    }

    const Grid grid = Grid::make(dim, points, extent);
    FieldKind kind = FieldKind::ScalarDensity;
    if (ncomp == dim) {
        kind = FieldKind::Vector;
    } else if (ncomp == dim * (dim + 1) / 2 && ncomp != 1) {
        kind = FieldKind::SymTensor;
    } else if (ncomp != 1) {
        throw ConfigError("read_snapshot: component count does not match any "
                          "field kind");
    }
    Snapshot snap{name, Field(grid, kind)};
    auto raw = snap.field.raw();
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(double)));
    if (in.gcount() !=
        static_cast<std::streamsize>(raw.size() * sizeof(double))) {
        throw ConfigError("read_snapshot: truncated data in " + path);
    }
    return snap;
}

}  // namespace epadm
