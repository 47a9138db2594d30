#pragma once

#include "aeolus/sim/record.hpp"

#include <string>

namespace aeolus::flightlog {

/// Schema tag written as the first line of every dataset file; bumping it
/// invalidates old files loudly instead of coercing them.
inline constexpr const char* kDatasetSchema = "aeolus_dataset_v1";

/// Serialize a record to CSV on the 400 Hz base grid. Off-tick cells of the
/// slower channels (pressure, battery) are left empty, as are the
/// ground-truth columns when no row carries truth. Floats are written with
/// 17 significant digits so a reparse is bitwise identical.
void write_dataset(const sim::FlightRecord& rec, const std::string& path);

/// Parse a dataset file. Throws core::DataError on a schema-tag or header
/// mismatch, a malformed or non-finite cell, or non-increasing time, always
/// naming the offending data row (counted from 1).
sim::FlightRecord read_dataset(const std::string& path);

} // namespace aeolus::flightlog
