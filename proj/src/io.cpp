#include "qrabi/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace qrabi {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw IoError("write failed on stdout");
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open output file: " + path);
    f << content;
    f.close();
    if (!f) throw IoError("write failed: " + path);
}

std::vector<double> parse_range(const std::string& spec) {
    double start = 0, stop = 0, step = 0;
    char trail = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &trail) != 3)
        throw std::invalid_argument("range must be start:stop:step, got: " + spec);
    if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start)
        throw std::invalid_argument("range needs finite start <= stop and step > 0: " + spec);
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        const double v = start + k * step;
        if (v > stop + 0.5 * step) break;
        grid.push_back(std::min(v, stop));
    }
    return grid;
}

} // namespace qrabi
