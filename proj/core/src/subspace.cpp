#include "lpball/subspace.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpball::sections {

Subspace::Subspace(int n, int k, Eigen::MatrixXd basis) : n_(n), k_(k), basis_(std::move(basis)) {
    if (k < 1 || k > n) throw std::invalid_argument("Subspace: need 1 <= k <= n");
    if (basis_.rows() != k || basis_.cols() != n)
        throw std::invalid_argument("Subspace: basis must be k x n");
    const Eigen::MatrixXd gram = basis_ * basis_.transpose();
    const double err = (gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
    if (err > 1e-12)
        throw std::invalid_argument("Subspace: rows are not orthonormal (max deviation " +
                                    std::to_string(err) + ")");
}

bool Subspace::axis_aligned() const {
    // every basis row has exactly one nonzero entry of magnitude 1
    for (int i = 0; i < k_; ++i) {
        int nz = 0;
        for (int j = 0; j < n_; ++j)
            if (std::abs(basis_(i, j)) > 1e-14) ++nz;
        if (nz != 1) return false;
    }
    return true;
}

Subspace Subspace::random(int n, int k, Rng& rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        Eigen::MatrixXd m(n, k);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j) m(i, j) = rng.normal();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
        const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        bool degenerate = false;
        for (int j = 0; j < k; ++j) {
            if (std::abs(r(j, j)) < 1e-12) {
                degenerate = true;  // probability zero; resample
                break;
            }
            if (r(j, j) < 0.0) q.col(j) = -q.col(j);  // sign fix keeps the draw Haar
        }
        if (degenerate) continue;
        return Subspace(n, k, q.transpose());
    }
    throw std::runtime_error("Subspace::random: repeated rank deficiency");
}

Subspace Subspace::diagonal(int n, int k) {
    if (k < 1 || n < 1 || n % k != 0)
        throw std::invalid_argument("Subspace::diagonal: k must divide n");
    const int m = n / k;
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(k, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (int j = 0; j < k; ++j)
        for (int b = 0; b < m; ++b) basis(j, b * k + j) = scale;
    return Subspace(n, k, std::move(basis));
}

Subspace Subspace::axis(int n, int k) {
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(k, n);
    for (int j = 0; j < k; ++j) basis(j, j) = 1.0;
    return Subspace(n, k, std::move(basis));
}

void Subspace::save(std::ostream& os) const {
    for (int i = 0; i < k_; ++i) {
        std::string line;
        for (int j = 0; j < n_; ++j) {
            if (j) line.push_back(' ');
            char buf[32];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), basis_(i, j));
            (void)ec;
            line.append(buf, ptr);
        }
        os << line << '\n';
    }
}

Subspace Subspace::load(std::istream& is) {
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
    if (rows.empty()) throw std::invalid_argument("Subspace::load: no rows");
    const int k = static_cast<int>(rows.size());
    const int n = static_cast<int>(rows.front().size());
    Eigen::MatrixXd basis(k, n);
    for (int i = 0; i < k; ++i) {
        if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
            throw std::invalid_argument("Subspace::load: ragged rows");
        for (int j = 0; j < n; ++j) basis(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return Subspace(n, k, std::move(basis));
}

} // namespace lpball::sections
