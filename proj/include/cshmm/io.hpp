#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cshmm/errors.hpp"

namespace cshmm {

// Numbers render with 12 significant digits in all emitted files.
inline std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Writes content to a temporary sibling and renames it into place, so a
// failed run never leaves a partial file.
inline void atomic_write_file(const std::string& path,
                              const std::string& content) {
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp.string() + " for writing");
    os << content;
    if (!os) throw Error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

// Comma-separated, LF line endings, header always present.
class CsvBuilder {
 public:
  explicit CsvBuilder(const std::vector<std::string>& header) {
    append_row(header);
  }
  void append_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

}  // namespace cshmm
