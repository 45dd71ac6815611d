#include "nblab/zero_table.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>

#include "nblab/errors.hpp"

namespace nblab {

namespace {

bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace

ZeroTable::ZeroTable(std::vector<double> ordinates, std::string source)
    : ordinates_(std::move(ordinates)), source_(std::move(source)) {
    for (std::size_t i = 0; i < ordinates_.size(); ++i) {
        if (!(ordinates_[i] > 0.0))
            throw PreconditionError("zero table: ordinates must be positive");
        if (i > 0 && !(ordinates_[i] > ordinates_[i - 1]))
            throw PreconditionError("zero table: ordinates must be strictly increasing");
    }
}

ZeroTable ZeroTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open zero table '" + path + "'");
    std::vector<double> ords;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank_or_comment(line)) continue;
        const char* begin = line.c_str();
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(begin, &end);
        if (end == begin || errno != 0)
            throw ParseError(path + ":" + std::to_string(lineno) + ": not a decimal ordinate: '" + line + "'");
        // allow trailing whitespace only
        for (const char* p = end; *p; ++p)
            if (!std::isspace(static_cast<unsigned char>(*p)))
                throw ParseError(path + ":" + std::to_string(lineno) + ": trailing junk after ordinate");
        if (!(v > 0.0))
            throw ParseError(path + ":" + std::to_string(lineno) + ": ordinate must be positive");
        if (!ords.empty() && !(v > ords.back()))
            throw ParseError(path + ":" + std::to_string(lineno) +
                             ": ordinates must be strictly increasing (" + std::to_string(v) +
                             " after " + std::to_string(ords.back()) + ")");
        ords.push_back(v);
    }
    return ZeroTable(std::move(ords), path);
}

std::vector<double> ZeroTable::zeros_in_range(double t_lo, double t_hi) const {
    if (t_lo > t_hi)
        throw PreconditionError("zeros_in_range: t_lo > t_hi");
    auto lo = std::lower_bound(ordinates_.begin(), ordinates_.end(), t_lo);
    auto hi = std::upper_bound(ordinates_.begin(), ordinates_.end(), t_hi);
    return std::vector<double>(lo, hi);
}

} // namespace nblab
