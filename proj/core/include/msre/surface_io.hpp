#pragma once

#include <iosfwd>
#include <string>

#include "msre/lattice.hpp"

namespace msre {

/*!
 * Flat little-endian binary layout:
 *   "MSRE", u32 version, i64 d, i64 n, i64 lo[d], i64 hi[d],
 *   f64 interior[|box| * n],
 *   u64 count, then count records of (i64 vertex[d], f64 value[n])
 * The records list the shell vertices whose value is nonzero.
 */
void write_surface(std::ostream& out, const Surface& s);
Surface read_surface(std::istream& in);

void save_surface(const std::string& path, const Surface& s);
Surface load_surface(const std::string& path);

}  // namespace msre
