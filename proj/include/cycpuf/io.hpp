#ifndef CYCPUF_IO_HPP
#define CYCPUF_IO_HPP

#include <string>
#include <vector>

namespace cycpuf {

/// True when the path ends in ".gz" (transparent gzip on read/write).
bool is_gz_path(const std::string &path);

/// Write the whole buffer atomically: temp file in the same directory,
/// then rename. Gzip-compresses when the path ends in ".gz".
void write_file_atomic(const std::string &path, const std::string &content);

/// Read a whole file, decompressing ".gz" paths.
std::string read_file(const std::string &path);

/// Split into lines; tolerates a missing final newline and CRLF.
std::vector<std::string> split_lines(const std::string &content);

} // namespace cycpuf

#endif
