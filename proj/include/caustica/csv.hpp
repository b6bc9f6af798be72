#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "caustica/units.hpp"

namespace caustica {

/// RFC-4180 CSV builder: header row, CRLF line endings, shortest
/// round-trip number formatting.
class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header) {
        for (size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << "\r\n";
    }

    void row(const std::vector<double>& values) {
        for (size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            out_ << format_double(values[i]);
        }
        out_ << "\r\n";
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

}  // namespace caustica
