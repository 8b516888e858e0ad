#pragma once

#include <iosfwd>
#include <string>

#include "flakelab/matrix.hpp"

namespace flakelab {

/// Verdict archive: one CSV per campaign with header
/// run_index,iteration_id,order_mode,order_seed,machine_fingerprint,test_id,verdict,duration_s
///
/// Every cell of the matrix is written, ABSENT included, ordered by run then
/// test. order_mode is `same` or `shuffled`; order_seed is empty for same-order
/// runs. Timestamps and exit status are not part of the archive. A matrix
/// without tests writes one row per run with an empty test_id so that the
/// runs survive a reload.
void write_archive(std::ostream& out, const VerdictMatrix& matrix);
void write_archive_file(const std::string& path, const VerdictMatrix& matrix);

/// Throws Error(MalformedArchive) on schema violations.
VerdictMatrix read_archive(std::istream& in);
VerdictMatrix read_archive_file(const std::string& path);

}  // namespace flakelab
