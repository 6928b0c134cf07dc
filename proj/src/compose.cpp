#include "psdcomp/compose.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace psdcomp {

namespace {

const std::vector<RuleInfo> kRegistry = {
    // id, name, bilinear, compr_family, degenerate
    {CompositionRule::VerbOnly, "verb-only", false, false, false},
    {CompositionRule::Fuzz, "fuzz", false, false, false},
    {CompositionRule::FuzzSwitched, "fuzz-switched", false, false, false},
    {CompositionRule::Phaser, "phaser", false, false, false},
    {CompositionRule::PhaserSwitched, "phaser-switched", false, false, false},
    {CompositionRule::Mult, "mult", true, true, false},
    {CompositionRule::TracedNoun, "traced-noun", true, true, false},
    {CompositionRule::TracedVerb, "traced-verb", true, true, false},
    {CompositionRule::Diag, "diag", true, true, false},
    {CompositionRule::SummedNoun, "summed-noun", true, true, false},
    {CompositionRule::SummedVerb, "summed-verb", true, true, false},
    {CompositionRule::DiagVerb, "diag-verb", true, true, false},
    {CompositionRule::DiagNoun, "diag-noun", true, true, false},
    {CompositionRule::TracedAddition, "traced-addition", true, true, false},
    {CompositionRule::SummedAddition, "summed-addition", true, true, false},
    {CompositionRule::RawTrNV, "raw-tr-n-v", true, false, false},
    {CompositionRule::RawTrNVIdentity, "raw-tr-nv-identity", true, false, true},
    {CompositionRule::RawTrVN, "raw-tr-v-n", true, false, false},
    {CompositionRule::RawDiagDiag, "raw-diag-diag", true, false, false},
    {CompositionRule::RawMNSumV, "raw-m-n-sum-v", true, false, false},
    {CompositionRule::RawMTrNVJ, "raw-m-tr-nv-j", true, false, true},
    {CompositionRule::RawMVSumN, "raw-m-v-sum-n", true, false, false},
    {CompositionRule::RawTrNSumVJ, "raw-tr-n-sum-v-j", true, false, true},
    {CompositionRule::RawISumNSumV, "raw-i-sum-n-sum-v", true, false, true},
    {CompositionRule::RawTrVSumNJ, "raw-tr-v-sum-n-j", true, false, true},
    {CompositionRule::RawDiagProdTraceJ, "raw-diagprod-trace-j", true, false,
     true},
    {CompositionRule::RawSumNDiagV, "raw-sum-n-diag-v", true, false, false},
    {CompositionRule::RawSumVDiagN, "raw-sum-v-diag-n", true, false, false},
    {CompositionRule::RawMult, "raw-mult", true, false, false},
    {CompositionRule::RawFourSpider, "raw-four-spider", true, false, true},
};

// Frobenius pairing sum_ij n_ij v_ij; the bilinear extension of tr(nv).
double frob_pair(const Matrix& n, const Matrix& v) {
    return n.cwiseProduct(v).sum();
}

Matrix diag_product(const Matrix& n, const Matrix& v) {
    return Matrix(n.diagonal().cwiseProduct(v.diagonal()).asDiagonal());
}

// Spectral square root with tolerance-level negative eigenvalues clamped.
Matrix psd_sqrt(const PsdMatrix& a, const Tolerance& tol) {
    SpectralDecomposition sd = sym_eigendecompose(a, tol);
    Matrix out = Matrix::Zero(a.dim(), a.dim());
    for (const auto& g : sd.groups)
        out += std::sqrt(std::max(g.eigenvalue, 0.0)) * g.projector;
    return out;
}

Matrix fuzz_apply(const PsdMatrix& spectral_arg, const PsdMatrix& other,
                  const Tolerance& tol) {
    SpectralDecomposition sd = sym_eigendecompose(spectral_arg, tol);
    Matrix out = Matrix::Zero(spectral_arg.dim(), spectral_arg.dim());
    for (const auto& g : sd.groups) {
        double p = std::max(g.eigenvalue, 0.0);
        out += p * g.projector * other.entries() * g.projector;
    }
    return out;
}

}  // namespace

const std::vector<RuleInfo>& rule_registry() { return kRegistry; }

const RuleInfo& rule_info(CompositionRule rule) {
    for (const auto& r : kRegistry)
        if (r.id == rule) return r;
    throw UnknownRule("rule id not in registry");
}

CompositionRule rule_from_name(const std::string& name) {
    for (const auto& r : kRegistry)
        if (r.name == name) return r.id;
    std::string valid;
    for (const auto& r : kRegistry) valid += r.name + " ";
    throw UnknownRule("unknown rule '" + name + "'; valid ids: " + valid);
}

const std::string& rule_name(CompositionRule rule) {
    return rule_info(rule).name;
}

std::vector<CompositionRule> compr_family_rules() {
    std::vector<CompositionRule> out;
    for (const auto& r : kRegistry)
        if (r.compr_family) out.push_back(r.id);
    return out;
}

Matrix eval_bilinear(CompositionRule rule, const Matrix& n, const Matrix& v) {
    detail::check_same_dim(n, v);
    const double m = double(n.rows());
    const Eigen::Index mi = n.rows();
    switch (rule) {
        case CompositionRule::Mult:
        case CompositionRule::RawMult:
            return n.cwiseProduct(v);
        case CompositionRule::TracedNoun:
            return (n.trace() / m) * v;
        case CompositionRule::TracedVerb:
            return (v.trace() / m) * n;
        case CompositionRule::Diag:
        case CompositionRule::RawDiagDiag:
            return diag_product(n, v);
        case CompositionRule::SummedNoun:
            return (n.sum() / (m * m)) * v;
        case CompositionRule::SummedVerb:
            return (v.sum() / (m * m)) * n;
        case CompositionRule::DiagVerb:
            return (n.sum() / (m * m)) * diag_of(v);
        case CompositionRule::DiagNoun:
            return (v.sum() / (m * m)) * diag_of(n);
        case CompositionRule::TracedAddition:
            return (n.trace() / (2 * m)) * v + (v.trace() / (2 * m)) * n;
        case CompositionRule::SummedAddition:
            return (n.sum() / (m * m)) * v + (v.sum() / (m * m)) * n;
        case CompositionRule::RawTrNV:
            return n.trace() * v;
        case CompositionRule::RawTrNVIdentity:
            return frob_pair(n, v) * Matrix::Identity(mi, mi);
        case CompositionRule::RawTrVN:
            return v.trace() * n;
        case CompositionRule::RawMNSumV:
            return m * v.sum() * n;
        case CompositionRule::RawMTrNVJ:
            return m * frob_pair(n, v) * all_ones(mi);
        case CompositionRule::RawMVSumN:
            return m * n.sum() * v;
        case CompositionRule::RawTrNSumVJ:
            return n.trace() * v.sum() * all_ones(mi);
        case CompositionRule::RawISumNSumV:
            return n.sum() * v.sum() * Matrix::Identity(mi, mi);
        case CompositionRule::RawTrVSumNJ:
            return v.trace() * n.sum() * all_ones(mi);
        case CompositionRule::RawDiagProdTraceJ:
            return n.diagonal().cwiseProduct(v.diagonal()).sum() *
                   all_ones(mi);
        case CompositionRule::RawSumNDiagV:
            return n.sum() * diag_of(v);
        case CompositionRule::RawSumVDiagN:
            return v.sum() * diag_of(n);
        case CompositionRule::RawFourSpider:
            return m * n.sum() * v.sum() * all_ones(mi);
        default:
            throw NotLinearRule("rule '" + rule_name(rule) +
                                "' is not bilinear");
    }
}

PsdMatrix compose(CompositionRule rule, const PsdMatrix& n, const PsdMatrix& v,
                  const Tolerance& tol) {
    if (n.dim() != v.dim())
        throw DimensionError("compose: dimension mismatch");
    switch (rule) {
        case CompositionRule::VerbOnly:
            return v;
        case CompositionRule::Fuzz:
            return PsdMatrix(fuzz_apply(v, n, tol), tol);
        case CompositionRule::FuzzSwitched:
            return PsdMatrix(fuzz_apply(n, v, tol), tol);
        case CompositionRule::Phaser: {
            Matrix r = psd_sqrt(v, tol);
            return PsdMatrix(r * n.entries() * r, tol);
        }
        case CompositionRule::PhaserSwitched: {
            Matrix r = psd_sqrt(n, tol);
            return PsdMatrix(r * v.entries() * r, tol);
        }
        default:
            return PsdMatrix(eval_bilinear(rule, n.entries(), v.entries()),
                             tol);
    }
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

ChoiMatrix kraus_apply(const KrausSet& kraus, const PsdMatrix& v) {
    if (kraus.operators.empty())
        throw InvalidMatrix("empty Kraus set");
    if (v.dim() != kraus.m)
        throw DimensionError("kraus_apply: dimension mismatch");
    Eigen::Index mm = kraus.m * kraus.m;
    Matrix out = Matrix::Zero(mm, mm);
    for (const auto& k : kraus.operators) {
        if (k.rows() != mm || k.cols() != kraus.m)
            throw DimensionError("Kraus operator has wrong shape");
        out += k * v.entries() * k.transpose();
    }
    return {kraus.m, kraus.m, out};
}

Matrix apply_choi(const ChoiMatrix& choi, const Matrix& n) {
    const Eigen::Index m = choi.in_dim;
    const Eigen::Index d = choi.out_dim;
    if (n.rows() != m || n.cols() != m)
        throw DimensionError("apply_choi: dimension mismatch");
    if (choi.entries.rows() != d * m || choi.entries.cols() != d * m)
        throw DimensionError("apply_choi: Choi matrix has wrong shape");
    Matrix prod = choi.entries * kron(Matrix::Identity(d, d), n.transpose());
    // partial trace over the second tensor factor
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b)
            for (Eigen::Index k = 0; k < m; ++k)
                out(a, b) += prod(a * m + k, b * m + k);
    return out;
}

namespace {

// Basis-action Choi assembly on an arbitrary (not necessarily psd) argument.
ChoiMatrix choi_any(CompositionRule rule, const Matrix& v) {
    if (!rule_info(rule).bilinear)
        throw NotLinearRule("rule '" + rule_name(rule) +
                            "' has no Choi matrix");
    const Eigen::Index m = v.rows();
    Matrix c = Matrix::Zero(m * m, m * m);
    Matrix unit = Matrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            unit(i, j) = 1;
            Matrix phi = eval_bilinear(rule, unit, v);
            for (Eigen::Index a = 0; a < m; ++a)
                for (Eigen::Index b = 0; b < m; ++b)
                    c(a * m + i, b * m + j) += phi(a, b);
            unit(i, j) = 0;
        }
    return {m, m, c};
}

}  // namespace

ChoiMatrix choi_of_rule(CompositionRule rule, const PsdMatrix& v) {
    return choi_any(rule, v.entries());
}

ChoiMatrix outer_choi_of_rule(CompositionRule rule, Eigen::Index m) {
    if (!rule_info(rule).bilinear)
        throw NotLinearRule("rule '" + rule_name(rule) +
                            "' has no outer Choi matrix");
    const Eigen::Index mm = m * m;
    Matrix c = Matrix::Zero(mm * m, mm * m);
    Matrix unit = Matrix::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) {
            unit(i, j) = 1;
            Matrix inner = choi_any(rule, unit).entries;
            for (Eigen::Index a = 0; a < mm; ++a)
                for (Eigen::Index b = 0; b < mm; ++b)
                    c(a * m + i, b * m + j) += inner(a, b);
            unit(i, j) = 0;
        }
    return {m, mm, c};
}

KrausSet kraus_for_rule(CompositionRule rule, Eigen::Index m) {
    const double md = double(m);
    Matrix I = Matrix::Identity(m, m);
    Vector u = Vector::Ones(m);
    // vec of the identity: sum_i e_i (x) e_i
    Vector omega = Vector::Zero(m * m);
    for (Eigen::Index i = 0; i < m; ++i) omega(i * m + i) = 1;
    auto col = [&](Eigen::Index i) { return Matrix(I.col(i)); };

    auto scaled = [](std::vector<Matrix> ops, double s) {
        for (auto& k : ops) k *= s;
        return ops;
    };
    auto merged = [](std::vector<Matrix> a, const std::vector<Matrix>& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };

    // Raw structural Kraus sets, one per diagram.
    auto raw = [&](CompositionRule r) -> std::vector<Matrix> {
        std::vector<Matrix> ops;
        switch (r) {
            case CompositionRule::RawTrNV:
                for (Eigen::Index l = 0; l < m; ++l)
                    ops.push_back(kron(I, col(l)));
                return ops;
            case CompositionRule::RawTrNVIdentity:
                for (Eigen::Index l = 0; l < m; ++l)
                    ops.push_back(kron(col(l), I));
                return ops;
            case CompositionRule::RawTrVN:
                for (Eigen::Index l = 0; l < m; ++l)
                    ops.push_back(omega * col(l).transpose());
                return ops;
            case CompositionRule::RawDiagDiag:
                for (Eigen::Index i = 0; i < m; ++i)
                    ops.push_back(kron(col(i), col(i)) * col(i).transpose());
                return ops;
            case CompositionRule::RawMNSumV:
                ops.push_back(std::sqrt(md) * omega * u.transpose());
                return ops;
            case CompositionRule::RawMTrNVJ:
                ops.push_back(std::sqrt(md) * kron(Matrix(u), I));
                return ops;
            case CompositionRule::RawMVSumN:
                ops.push_back(std::sqrt(md) * kron(I, Matrix(u)));
                return ops;
            case CompositionRule::RawTrNSumVJ:
                for (Eigen::Index l = 0; l < m; ++l)
                    ops.push_back(kron(Matrix(u), col(l)) * u.transpose());
                return ops;
            case CompositionRule::RawISumNSumV:
                for (Eigen::Index l = 0; l < m; ++l)
                    ops.push_back(kron(col(l), Matrix(u)) * u.transpose());
                return ops;
            case CompositionRule::RawTrVSumNJ:
                for (Eigen::Index l = 0; l < m; ++l)
                    ops.push_back(kron(Matrix(u), Matrix(u)) *
                                  col(l).transpose());
                return ops;
            case CompositionRule::RawDiagProdTraceJ:
                for (Eigen::Index i = 0; i < m; ++i)
                    ops.push_back(kron(Matrix(u), col(i)) *
                                  col(i).transpose());
                return ops;
            case CompositionRule::RawSumNDiagV:
                for (Eigen::Index i = 0; i < m; ++i)
                    ops.push_back(kron(col(i), Matrix(u)) *
                                  col(i).transpose());
                return ops;
            case CompositionRule::RawSumVDiagN:
                for (Eigen::Index i = 0; i < m; ++i)
                    ops.push_back(kron(col(i), col(i)) * u.transpose());
                return ops;
            case CompositionRule::RawMult: {
                Matrix k = Matrix::Zero(m * m, m);
                for (Eigen::Index i = 0; i < m; ++i) k(i * m + i, i) = 1;
                ops.push_back(k);
                return ops;
            }
            case CompositionRule::RawFourSpider:
                ops.push_back(std::sqrt(md) * kron(Matrix(u), Matrix(u)) *
                              u.transpose());
                return ops;
            default:
                throw NotStructural("rule '" + rule_name(r) +
                                    "' has no structural Kraus form");
        }
    };

    std::vector<Matrix> ops;
    switch (rule) {
        case CompositionRule::TracedNoun:
            ops = scaled(raw(CompositionRule::RawTrNV), 1 / std::sqrt(md));
            break;
        case CompositionRule::TracedVerb:
            ops = scaled(raw(CompositionRule::RawTrVN), 1 / std::sqrt(md));
            break;
        case CompositionRule::Diag:
            ops = raw(CompositionRule::RawDiagDiag);
            break;
        case CompositionRule::SummedNoun:
            ops = scaled(raw(CompositionRule::RawMVSumN),
                         1 / std::sqrt(md * md * md));
            break;
        case CompositionRule::SummedVerb:
            ops = scaled(raw(CompositionRule::RawMNSumV),
                         1 / std::sqrt(md * md * md));
            break;
        case CompositionRule::DiagVerb:
            ops = scaled(raw(CompositionRule::RawSumNDiagV), 1 / md);
            break;
        case CompositionRule::DiagNoun:
            ops = scaled(raw(CompositionRule::RawSumVDiagN), 1 / md);
            break;
        case CompositionRule::Mult:
            ops = raw(CompositionRule::RawMult);
            break;
        case CompositionRule::TracedAddition:
            ops = merged(
                scaled(raw(CompositionRule::RawTrNV), 1 / std::sqrt(2 * md)),
                scaled(raw(CompositionRule::RawTrVN), 1 / std::sqrt(2 * md)));
            break;
        case CompositionRule::SummedAddition:
            ops = merged(scaled(raw(CompositionRule::RawMVSumN),
                                1 / std::sqrt(md * md * md)),
                         scaled(raw(CompositionRule::RawMNSumV),
                                1 / std::sqrt(md * md * md)));
            break;
        default:
            ops = raw(rule);
            break;
    }
    return {m, std::move(ops)};
}

bool is_completely_positive(CompositionRule rule, Eigen::Index m, int trials,
                            const Tolerance& tol, std::uint64_t seed) {
    if (!rule_info(rule).bilinear)
        throw NotLinearRule("rule '" + rule_name(rule) +
                            "' cannot be CP-certified");
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        PsdMatrix v = random_psd(m, rng);
        ChoiMatrix c = choi_of_rule(rule, v);
        if (!is_psd(0.5 * (c.entries + c.entries.transpose()), tol))
            return false;
    }
    ChoiMatrix outer = outer_choi_of_rule(rule, m);
    return is_psd(0.5 * (outer.entries + outer.entries.transpose()), tol);
}

bool block_positive_sampled(const ChoiMatrix& choi, int samples, double tol,
                            std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0, 1);
    auto unit_vec = [&](Eigen::Index n) {
        Vector x(n);
        do {
            for (Eigen::Index i = 0; i < n; ++i) x(i) = gauss(rng);
        } while (x.norm() < 1e-12);
        return Vector(x / x.norm());
    };
    for (int s = 0; s < samples; ++s) {
        Vector v = unit_vec(choi.out_dim);
        Vector w = unit_vec(choi.in_dim);
        Vector prod(choi.out_dim * choi.in_dim);
        for (Eigen::Index a = 0; a < choi.out_dim; ++a)
            for (Eigen::Index i = 0; i < choi.in_dim; ++i)
                prod(a * choi.in_dim + i) = v(a) * w(i);
        if (prod.dot(choi.entries * prod) < -tol) return false;
    }
    return true;
}

PsdMatrix random_psd(Eigen::Index m, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0, 1);
    Matrix g(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) g(i, j) = gauss(rng);
    return PsdMatrix::trusted(g.transpose() * g);
}

}  // namespace psdcomp
