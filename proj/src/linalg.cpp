#include "psdcomp/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace psdcomp {

namespace detail {

void check_finite(const Matrix& a) {
    if (!a.allFinite()) throw InvalidMatrix("matrix has non-finite entries");
}

void check_same_dim(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("matrix dimensions do not match");
}

}  // namespace detail

namespace {

double magnitude_scale(const Matrix& a) {
    return std::max(1.0, a.cwiseAbs().maxCoeff());
}

Matrix symmetrize(const Matrix& a) {
    if (a.rows() != a.cols()) throw InvalidMatrix("matrix is not square");
    return 0.5 * (a + a.transpose());
}

}  // namespace

PsdMatrix::PsdMatrix(const Matrix& a, const Tolerance& tol) {
    tol.validate();
    detail::check_finite(a);
    entries_ = symmetrize(a);
    if (entries_.size() == 0) throw InvalidMatrix("matrix is empty");
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries_,
                                             Eigen::EigenvaluesOnly);
    double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -tol.psd_tol * magnitude_scale(entries_))
        throw NotPsd("matrix is not positive semidefinite (min eigenvalue " +
                     std::to_string(min_eig) + ")");
}

PsdMatrix PsdMatrix::trusted(const Matrix& a) {
    detail::check_finite(a);
    PsdMatrix p;
    p.entries_ = symmetrize(a);
    return p;
}

PsdMatrix PsdMatrix::operator+(const PsdMatrix& other) const {
    detail::check_same_dim(entries_, other.entries_);
    return trusted(entries_ + other.entries_);
}

PsdMatrix PsdMatrix::scaled(double c) const {
    if (c < 0) throw NotPsd("negative scale would break psd");
    return trusted(c * entries_);
}

Matrix SpectralDecomposition::reconstruct() const {
    Matrix out;
    for (const auto& g : groups) {
        if (out.size() == 0)
            out = g.eigenvalue * g.projector;
        else
            out += g.eigenvalue * g.projector;
    }
    return out;
}

SpectralDecomposition sym_eigendecompose(const PsdMatrix& a,
                                         const Tolerance& tol) {
    tol.validate();
    const Matrix& m = a.entries();
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success)
        throw InvalidMatrix("eigendecomposition failed");
    const Vector& vals = es.eigenvalues();    // ascending
    const Matrix& vecs = es.eigenvectors();

    double lam_max = vals.cwiseAbs().maxCoeff();
    double group_tol = tol.eig_group_tol * std::max(1.0, lam_max);

    SpectralDecomposition sd;
    sd.grouping_tol = group_tol;
    Eigen::Index n = vals.size();
    Eigen::Index i = n - 1;
    while (i >= 0) {
        Eigen::Index j = i;
        // extend the group while adjacent eigenvalues are within tolerance
        while (j > 0 && vals[i] - vals[j - 1] <= group_tol) --j;
        Matrix p = Matrix::Zero(n, n);
        double mean = 0;
        for (Eigen::Index k = j; k <= i; ++k) {
            p += vecs.col(k) * vecs.col(k).transpose();
            mean += vals[k];
        }
        mean /= double(i - j + 1);
        sd.groups.push_back({mean, p});
        i = j - 1;
    }
    return sd;
}

bool is_psd(const Matrix& a, const Tolerance& tol) {
    tol.validate();
    detail::check_finite(a);
    if (a.rows() != a.cols()) throw InvalidMatrix("matrix is not square");
    double scale = magnitude_scale(a);
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InvalidMatrix("matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a),
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol.psd_tol * scale;
}

bool loewner_leq(const PsdMatrix& a, const PsdMatrix& b,
                 const Tolerance& tol) {
    if (a.dim() != b.dim())
        throw DimensionError("loewner_leq: dimension mismatch");
    return is_psd(b.entries() - a.entries(), tol);
}

PsdMatrix normalize_max_eig(const PsdMatrix& a, const Tolerance& tol) {
    tol.validate();
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.entries(),
                                             Eigen::EigenvaluesOnly);
    double lam_max = es.eigenvalues().maxCoeff();
    if (lam_max < tol.zero_tol)
        throw ZeroMatrix("cannot normalize a (near-)zero matrix");
    return PsdMatrix::trusted(a.entries() / lam_max);
}

double frobenius_norm(const Matrix& a) {
    detail::check_finite(a);
    return a.norm();
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    detail::check_same_dim(a, b);
    return a.cwiseProduct(b);
}

Matrix diag_of(const Matrix& a) {
    if (a.rows() != a.cols()) throw InvalidMatrix("matrix is not square");
    return a.diagonal().asDiagonal();
}

double sum_entries(const Matrix& a) { return a.sum(); }

double trace(const Matrix& a) {
    if (a.rows() != a.cols()) throw InvalidMatrix("matrix is not square");
    return a.trace();
}

Matrix all_ones(Eigen::Index m) { return Matrix::Ones(m, m); }

}  // namespace psdcomp
