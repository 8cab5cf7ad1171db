#pragma once

#include "lpball/rng.hpp"

#include <Eigen/Dense>
#include <iosfwd>

namespace lpball::sections {

/// A k-dimensional subspace of R^n held as a k x n matrix with orthonormal
/// rows. A standard Gaussian on the subspace is basis^T g with g ~ N(0, I_k);
/// for x in the subspace the gauge of the l_p-ball section equals the ambient
/// l_p norm of x.
class Subspace {
public:
    Subspace(int n, int k, Eigen::MatrixXd basis);

    int ambient_dim() const { return n_; }
    int dim() const { return k_; }
    const Eigen::MatrixXd& basis() const { return basis_; }

    bool axis_aligned() const;

    /// Haar-distributed subspace (orthonormalized Gaussian matrix).
    static Subspace random(int n, int k, Rng& rng);
    /// Main diagonal of the decomposition R^n = R^k x ... x R^k (k | n).
    static Subspace diagonal(int n, int k);
    /// Span of the first k coordinate axes.
    static Subspace axis(int n, int k);

    /// Plain-text exchange format: row-major, one basis row per line.
    void save(std::ostream& os) const;
    static Subspace load(std::istream& is);

private:
    int n_, k_;
    Eigen::MatrixXd basis_;  // k x n
};

} // namespace lpball::sections
