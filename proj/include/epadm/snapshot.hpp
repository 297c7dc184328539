#pragma once

#include <string>

#include "epadm/grid.hpp"

// Field snapshot files: a small text header
//
//   EPADM1
//   name <field name>
//   dim <D>
//   points <n0> [n1] [n2]
//   extent <L0> [L1] [L2]
//   components <C>
//   data
//
// followed by little-endian 64-bit floats in row-major node order with
// components innermost. Files are written to a temporary name and renamed so
// readers never see partial snapshots.

namespace epadm {

void write_snapshot(const std::string& path, const std::string& name,
                    const Field& field);

struct Snapshot {
    std::string name;
    Field field;
};

// The grid is reconstructed with default FD/interpolation orders; the field
// kind is inferred from the component count (1 -> scalar density, dim ->
// vector, else symmetric tensor).
Snapshot read_snapshot(const std::string& path);

}  // namespace epadm
