// io.hpp - Deterministic numeric formatting and output-file plumbing

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qrabi {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// %.17g: shortest text that round-trips any double bit pattern.
std::string fmt17(double v);

// Writes content to path, or to stdout when path is "-". Throws IoError.
void write_text_output(const std::string& path, const std::string& content);

// Parses "start:stop:step" into an inclusive grid (endpoints kept within half
// a step). Throws std::invalid_argument on malformed input.
std::vector<double> parse_range(const std::string& spec);

} // namespace qrabi
