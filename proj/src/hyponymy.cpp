#include "psdcomp/hyponymy.hpp"

#include <algorithm>
#include <cmath>

namespace psdcomp {

Measure measure_from_name(const std::string& name) {
    if (name == "ke") return Measure::kE;
    if (name == "kba") return Measure::kBA;
    if (name == "crisp") return Measure::Crisp;
    throw UnknownRule("unknown measure '" + name + "'; valid ids: ke kba crisp");
}

const std::string& measure_name(Measure m) {
    static const std::string ke = "ke", kba = "kba", cr = "crisp";
    switch (m) {
        case Measure::kE: return ke;
        case Measure::kBA: return kba;
        default: return cr;
    }
}

double k_e(const PsdMatrix& a, const PsdMatrix& b, const Tolerance& tol) {
    tol.validate();
    if (a.dim() != b.dim()) throw DimensionError("k_e: dimension mismatch");
    double norm_a = frobenius_norm(a.entries());
    if (norm_a < tol.zero_tol) throw ZeroMatrix("k_e: A is zero");

    Matrix diff = b.entries() - a.entries();
    // same magnitude scaling as is_psd, so k_e = 1 exactly when crisp holds
    double scale = std::max(1.0, diff.cwiseAbs().maxCoeff());
    double threshold = -tol.psd_tol * scale;

    Eigen::SelfAdjointEigenSolver<Matrix> es(diff);
    double err_sq = 0;  // ||E||^2 with E the negative eigenpart of B - A
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double lam = es.eigenvalues()(i);
        if (lam < threshold) err_sq += lam * lam;
    }
    return 1.0 - std::sqrt(err_sq) / norm_a;
}

double k_ba(const PsdMatrix& a, const PsdMatrix& b, const Tolerance& tol) {
    tol.validate();
    if (a.dim() != b.dim()) throw DimensionError("k_ba: dimension mismatch");
    Matrix diff = b.entries() - a.entries();
    Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
    double lam_abs_max = es.eigenvalues().cwiseAbs().maxCoeff();
    double drop = tol.zero_tol * std::max(1.0, lam_abs_max);
    double num = 0, den = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double lam = es.eigenvalues()(i);
        if (std::abs(lam) <= drop) continue;
        num += lam;
        den += std::abs(lam);
    }
    if (den == 0) return 1.0;  // numerically zero difference: crisp trivially
    return num / den;
}

bool crisp(const PsdMatrix& a, const PsdMatrix& b, const Tolerance& tol) {
    return loewner_leq(a, b, tol);
}

double score(Measure measure, const PsdMatrix& a, const PsdMatrix& b,
             const Tolerance& tol) {
    switch (measure) {
        case Measure::kE: return k_e(a, b, tol);
        case Measure::kBA: return k_ba(a, b, tol);
        default: return crisp(a, b, tol) ? 1.0 : 0.0;
    }
}

}  // namespace psdcomp
