#pragma once

#include <iosfwd>
#include <string>

#include "xxzdm/sweep.hpp"

namespace xxzdm {

/// Shortest round-trip decimal representation of a binary64 value.
std::string format_real(Real x);

/// '#'-prefixed meta lines, a header row, then data; flag is the last column.
void write_csv(std::ostream& os, const SweepTable& t);

/// {"meta": {...}, "columns": [...], "rows": [{col: value, ...}, ...]};
/// NaN cells become null, empty flags are omitted.
void write_json(std::ostream& os, const SweepTable& t);

} // namespace xxzdm
