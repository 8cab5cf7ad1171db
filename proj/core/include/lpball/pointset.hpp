#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace lpball::apps {

/// A finite family of points in R^d, with the numerical rank of its span
/// (singular values below 1e-10 of the largest are treated as zero).
class PointSet {
public:
    explicit PointSet(std::vector<std::vector<double>> points);

    int count() const { return m_; }
    int ambient_dim() const { return d_; }
    int span_rank() const { return rank_; }
    const std::vector<std::vector<double>>& points() const { return points_; }
    const Eigen::MatrixXd& matrix() const { return mat_; }  // m x d

    double max_l2_norm() const;

    /// Orthonormal basis of the span, rank x d (rows).
    Eigen::MatrixXd span_basis() const;

    /// FNV-1a hash of the exact point bytes (for report provenance).
    std::uint64_t content_hash() const;

    /// Plain-text matrix, one point per line.
    void save(std::ostream& os) const;
    static PointSet load(std::istream& is);

private:
    int m_ = 0, d_ = 0, rank_ = 0;
    std::vector<std::vector<double>> points_;
    Eigen::MatrixXd mat_;
};

} // namespace lpball::apps
