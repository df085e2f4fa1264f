#include "treealign/points.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "treealign/error.hpp"

namespace treealign {

PointSet::PointSet(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0 && !coords_.empty()) throw InputError("point set: zero dimension with coordinates");
    if (dim_ != 0 && coords_.size() % dim_ != 0) throw InputError("point set: coordinate count not a multiple of dimension");
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    PointSet ps;
    ps.dim_ = rows.front().size();
    if (ps.dim_ == 0) throw InputError("point set: empty row");
    for (const auto& r : rows) ps.push_back(r);
    return ps;
}

void PointSet::push_back(std::span<const double> p) {
    if (dim_ == 0) dim_ = p.size();
    if (p.size() != dim_) throw InputError("point set: row has dimension " + std::to_string(p.size()) + ", expected " + std::to_string(dim_));
    coords_.insert(coords_.end(), p.begin(), p.end());
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
    PointSet out;
    out.dim_ = dim_;
    out.coords_.reserve(indices.size() * dim_);
    for (std::size_t i : indices) {
        const auto r = row(i);
        out.coords_.insert(out.coords_.end(), r.begin(), r.end());
    }
    return out;
}

std::vector<double> PointSet::mean() const {
    std::vector<double> m(dim_, 0.0);
    const std::size_t n = size();
    if (n == 0) return m;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < dim_; ++k) m[k] += coords_[i * dim_ + k];
    for (double& x : m) x /= static_cast<double>(n);
    return m;
}

WeightedPoints WeightedPoints::uniform(PointSet points) {
    const std::size_t n = points.size();
    if (n == 0) throw InputError("measure must have at least one point");
    return {std::move(points), std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

WeightedPoints read_points(std::istream& in, bool has_weight_column, const std::string* source) {
    const std::string where = source ? *source : std::string("<points>");
    WeightedPoints wp;
    std::string line;
    std::size_t line_no = 0;
    std::vector<double> row;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        row.clear();
        std::string tok;
        while (ls >> tok) {
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() || *end != '\0' || !std::isfinite(v))
                throw InputError(where + ":" + std::to_string(line_no) + ": malformed number '" + tok + "'");
            row.push_back(v);
        }
        if (row.empty()) continue;
        std::span<const double> coords(row);
        if (has_weight_column) {
            if (row.size() < 2) throw InputError(where + ":" + std::to_string(line_no) + ": expected weight followed by coordinates");
            if (row[0] < 0.0) throw InputError(where + ":" + std::to_string(line_no) + ": negative weight");
            wp.weights.push_back(row[0]);
            coords = coords.subspan(1);
        }
        if (!wp.points.empty() && coords.size() != wp.points.dim())
            throw InputError(where + ":" + std::to_string(line_no) + ": row has " + std::to_string(coords.size()) +
                             " coordinates, expected " + std::to_string(wp.points.dim()));
        wp.points.push_back(coords);
    }
    if (wp.points.empty()) throw InputError(where + ": no points");
    if (!has_weight_column) {
        wp.weights.assign(wp.points.size(), 1.0 / static_cast<double>(wp.points.size()));
    } else {
        double total = 0.0;
        for (double w : wp.weights) total += w;
        if (!(total > 0.0)) throw InputError(where + ": weights sum to zero");
        for (double& w : wp.weights) w /= total;
        double check = 0.0;
        for (double w : wp.weights) check += w;
        if (std::abs(check - 1.0) > 1e-6) throw InputError(where + ": weights do not normalize to 1");
    }
    return wp;
}

void write_points(std::ostream& out, const WeightedPoints& wp, bool with_weight_column) {
    const auto old = out.precision(17);
    for (std::size_t i = 0; i < wp.points.size(); ++i) {
        bool first = true;
        if (with_weight_column) {
            out << wp.weights[i];
            first = false;
        }
        for (double x : wp.points.row(i)) {
            if (!first) out << ' ';
            out << x;
            first = false;
        }
        out << '\n';
    }
    out.precision(old);
}

}  // namespace treealign
