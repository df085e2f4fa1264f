#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace treealign {

// Row-major set of d-dimensional points.
class PointSet {
public:
    PointSet() = default;
    PointSet(std::size_t dim, std::vector<double> coords);
    static PointSet from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool empty() const { return size() == 0; }
    std::span<const double> row(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    std::span<double> row(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }
    std::span<const double> coords() const { return coords_; }
    const double* data() const { return coords_.data(); }

    void push_back(std::span<const double> p);
    PointSet subset(std::span<const std::size_t> indices) const;
    std::vector<double> mean() const;

    friend bool operator==(const PointSet&, const PointSet&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

// Raw points with probability weights; the pre-embedding form of a measure.
struct WeightedPoints {
    PointSet points;
    std::vector<double> weights;

    static WeightedPoints uniform(PointSet points);
    std::size_t size() const { return points.size(); }
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

// Whitespace-separated rows, one point per row; dimension from the first row.
// With has_weight_column the first column is a (not yet normalized) weight.
WeightedPoints read_points(std::istream& in, bool has_weight_column = false, const std::string* source = nullptr);
void write_points(std::ostream& out, const WeightedPoints& wp, bool with_weight_column);

}  // namespace treealign
