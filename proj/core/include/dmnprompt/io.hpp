#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dmnprompt {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);

/// Writes via a sibling temp file and rename, so readers never observe a
/// partially written file.
void write_file_atomic(const std::string& path, std::string_view contents);

/// Appends and flushes.
void append_to_file(const std::string& path, std::string_view contents);

}  // namespace dmnprompt
