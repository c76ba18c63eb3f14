#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {

/// Fixed 17-significant-digit formatting so CSV output is byte-stable across
/// runs and round-trips doubles exactly.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw error("cannot open file for writing: " + path);
    }

    template <typename... Ts>
    void row(const Ts&... fields) {
        bool first = true;
        ((write_field(fields, first), first = false), ...);
        out_ << '\n';
    }

private:
    void write_field(double v, bool first) { sep(first); out_ << format_double(v); }
    void write_field(int v, bool first) { sep(first); out_ << v; }
    void write_field(long v, bool first) { sep(first); out_ << v; }
    void write_field(long long v, bool first) { sep(first); out_ << v; }
    void write_field(std::size_t v, bool first) { sep(first); out_ << v; }
    void write_field(const char* v, bool first) { sep(first); out_ << v; }
    void write_field(const std::string& v, bool first) { sep(first); out_ << v; }
    void sep(bool first) {
        if (!first) out_ << ',';
    }

    std::ofstream out_;
};

} // namespace fraclap
