// csv.hpp — deterministic CSV output (shortest round-trip numerals)

#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace qfn {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);

    void row(const std::vector<double>& values);
    void close();

  private:
    std::ofstream out_;
    std::size_t n_columns_;
};

// FNV-1a 64-bit hash of a file's bytes, as fixed-width hex.
std::string fnv1a_hex(const std::string& path);

}  // namespace qfn
