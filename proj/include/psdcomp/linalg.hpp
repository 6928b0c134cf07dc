#ifndef PSDCOMP_LINALG_HPP
#define PSDCOMP_LINALG_HPP

#include <Eigen/Dense>
#include <vector>

#include "psdcomp/errors.hpp"

namespace psdcomp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Tolerances used throughout. psd_tol and eig_group_tol are relative:
// they are scaled by max(1, magnitude) of the matrix at the point of use.
struct Tolerance {
    double psd_tol = 1e-9;
    double eig_group_tol = 1e-8;
    double zero_tol = 1e-12;

    void validate() const {
        if (psd_tol <= 0 || eig_group_tol <= 0 || zero_tol <= 0)
            throw InvalidMatrix("Tolerance fields must be strictly positive");
    }
};

// A real symmetric matrix certified positive semidefinite within tolerance.
// Symmetrized as (A + A^T)/2 on construction.
class PsdMatrix {
  public:
    // Throws InvalidMatrix for non-finite entries, NotPsd if the minimum
    // eigenvalue is below -psd_tol * max(1, max|entry|).
    explicit PsdMatrix(const Matrix& a, const Tolerance& tol = {});

    // Symmetrizes but skips the eigenvalue certification. For callers that
    // already hold a structural psd guarantee (e.g. Gram sums).
    static PsdMatrix trusted(const Matrix& a);

    Eigen::Index dim() const { return entries_.rows(); }
    const Matrix& entries() const { return entries_; }

    PsdMatrix operator+(const PsdMatrix& other) const;
    PsdMatrix scaled(double c) const;  // c must be >= 0

  private:
    PsdMatrix() = default;
    Matrix entries_;
};

// Eigenvalues grouped into eigenspaces with orthogonal projectors.
// Groups are ordered by descending eigenvalue.
struct SpectralGroup {
    double eigenvalue;
    Matrix projector;
};

struct SpectralDecomposition {
    std::vector<SpectralGroup> groups;
    double grouping_tol;

    Matrix reconstruct() const;
};

// Spectral decomposition with near-degenerate eigenvalues merged into a
// single eigenspace projector. Grouping threshold is
// eig_group_tol * max(1, lambda_max).
SpectralDecomposition sym_eigendecompose(const PsdMatrix& a,
                                         const Tolerance& tol = {});

// True iff min eigenvalue of the symmetric matrix a is >= -psd_tol scaled by
// matrix magnitude. Throws InvalidMatrix for asymmetric or non-finite input.
bool is_psd(const Matrix& a, const Tolerance& tol = {});

// Loewner order: a <= b iff b - a is psd.
bool loewner_leq(const PsdMatrix& a, const PsdMatrix& b,
                 const Tolerance& tol = {});

// Divide by the maximum eigenvalue so the result has lambda_max = 1.
// Throws ZeroMatrix when lambda_max < zero_tol.
PsdMatrix normalize_max_eig(const PsdMatrix& a, const Tolerance& tol = {});

double frobenius_norm(const Matrix& a);

// Elementwise and structural helpers.
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix diag_of(const Matrix& a);
double sum_entries(const Matrix& a);
double trace(const Matrix& a);
Matrix all_ones(Eigen::Index m);

namespace detail {
void check_finite(const Matrix& a);
void check_same_dim(const Matrix& a, const Matrix& b);
}  // namespace detail

}  // namespace psdcomp

#endif
