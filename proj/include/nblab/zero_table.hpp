#pragma once

#include <string>
#include <vector>

namespace nblab {

// Sorted ordinates of critical-line zeta zeros, ingested from a text file
// (one decimal ordinate per line, '#' comments and blank lines ignored).
// Immutable after load; shareable across threads.
class ZeroTable {
public:
    ZeroTable() = default;
    ZeroTable(std::vector<double> ordinates, std::string source);

    static ZeroTable load(const std::string& path);

    const std::vector<double>& ordinates() const { return ordinates_; }
    const std::string& source() const { return source_; }
    double max_height() const { return ordinates_.empty() ? 0.0 : ordinates_.back(); }
    std::size_t size() const { return ordinates_.size(); }
    bool empty() const { return ordinates_.empty(); }

    // All ordinates g with t_lo <= g <= t_hi, increasing.
    std::vector<double> zeros_in_range(double t_lo, double t_hi) const;

private:
    std::vector<double> ordinates_;
    std::string source_;
};

} // namespace nblab
