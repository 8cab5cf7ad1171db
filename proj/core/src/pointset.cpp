#include "lpball/pointset.hpp"

#include <charconv>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lpball::apps {

PointSet::PointSet(std::vector<std::vector<double>> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("PointSet: no points");
    m_ = static_cast<int>(points_.size());
    d_ = static_cast<int>(points_.front().size());
    if (d_ < 1) throw std::invalid_argument("PointSet: zero-dimensional points");
    for (const auto& p : points_)
        if (static_cast<int>(p.size()) != d_)
            throw std::invalid_argument("PointSet: inconsistent dimensions");
    mat_.resize(m_, d_);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < d_; ++j) mat_(i, j) = points_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat_);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? 1e-10 * sv(0) : 0.0;
    rank_ = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank_;
}

double PointSet::max_l2_norm() const {
    double m = 0.0;
    for (int i = 0; i < m_; ++i) m = std::max(m, mat_.row(i).norm());
    return m;
}

Eigen::MatrixXd PointSet::span_basis() const {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat_, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? 1e-10 * sv(0) : 0.0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++r;
    return svd.matrixV().leftCols(r).transpose();
}

std::uint64_t PointSet::content_hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* data, std::size_t len) {
        const unsigned char* b = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 1099511628211ULL;
        }
    };
    for (const auto& p : points_) mix(p.data(), p.size() * sizeof(double));
    return h;
}

void PointSet::save(std::ostream& os) const {
    for (const auto& p : points_) {
        std::string line;
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (j) line.push_back(' ');
            char buf[32];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), p[j]);
            (void)ec;
            line.append(buf, ptr);
        }
        os << line << '\n';
    }
}

PointSet PointSet::load(std::istream& is) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return PointSet(std::move(rows));
}

} // namespace lpball::apps
