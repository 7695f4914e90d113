#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "risim/complex_matrix.hpp"

namespace risim::bench {

/// One captured channel snapshot for a single subcarrier.
struct CsiRecord {
    std::uint32_t subcarrier = 0;
    ComplexMatrix entries;         // N_R x N_T
    std::string timestamp;         // opaque, no commas
};

/// Line format, chosen to be diff-able and trivially parseable:
///   # nr=<R> nt=<T>
///   <subcarrier>,<re+imi>,...,<re+imi>,<timestamp>
/// with N_R * N_T row-major complex literals per record. The shape header is
/// the first non-blank line; an empty file is a valid empty capture.
/// Malformed lines are rejected with their line number.
std::vector<CsiRecord> ingest_csi(std::istream& in);
std::vector<CsiRecord> ingest_csi(const std::string& path);

void write_csi(std::ostream& out, const std::vector<CsiRecord>& records);
void write_csi(const std::string& path, const std::vector<CsiRecord>& records);

}  // namespace risim::bench
