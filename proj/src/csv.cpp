#include "qfn/csv.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace qfn {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), n_columns_(columns.size()) {
    if (!out_) {
        throw std::runtime_error("cannot open CSV file for writing: " + path);
    }
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (k > 0) out_ << ',';
        out_ << columns[k];
    }
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != n_columns_) {
        throw std::runtime_error("CSV row width does not match the header");
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (k > 0) out_ << ',';
        out_ << format_double(values[k]);
    }
    out_ << '\n';
}

void CsvWriter::close() {
    out_.close();
}

std::string fnv1a_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file for hashing: " + path);
    }
    std::uint64_t hash = 1469598103934665603ull;
    char chunk[4096];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize k = 0; k < in.gcount(); ++k) {
            hash ^= static_cast<unsigned char>(chunk[k]);
            hash *= 1099511628211ull;
        }
        if (!in) break;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

}  // namespace qfn
