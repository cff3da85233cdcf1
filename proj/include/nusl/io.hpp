#pragma once

#include "nusl/types.hpp"

#include <string>

namespace nusl::io {

/// CSV matrix: one line per matrix row, comma separated, optional header
/// line (skipped when the first field does not parse as a number).
Matrix load_matrix_csv(const std::string& path);
void save_matrix_csv(const Matrix& m, const std::string& path);

/// Binary blob: 16-byte header (magic "NUSL", u32 version, u32 d, u32 K,
/// little-endian) followed by column-major float64 entries.
Matrix load_matrix_blob(const std::string& path);
void save_matrix_blob(const Matrix& m, const std::string& path);

/// Dispatches on extension: .csv -> CSV, anything else -> blob.
Matrix load_matrix(const std::string& path);
void save_matrix(const Matrix& m, const std::string& path);

/// A vector is a 1 x n or n x 1 matrix in either format.
Vector load_vector(const std::string& path);

/// Writes to a temp file in the target directory, then renames.
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace nusl::io
