// csv.hpp — deterministic CSV emission with shortest round-trip numbers.

#pragma once

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

namespace qws {

// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

    void header(const std::string& columns) { out_ << columns << "\n"; }

    CsvWriter& field(double value) {
        sep();
        out_ << format_double(value);
        return *this;
    }

    CsvWriter& field(const std::string& value) {
        sep();
        out_ << value;
        return *this;
    }

    void end_row() {
        out_ << "\n";
        first_ = true;
    }

private:
    void sep() {
        if (!first_) out_ << ",";
        first_ = false;
    }

    std::ostream& out_;
    bool first_ = true;
};

}  // namespace qws
