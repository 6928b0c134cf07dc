#ifndef PSDCOMP_COMPOSE_HPP
#define PSDCOMP_COMPOSE_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "psdcomp/linalg.hpp"

namespace psdcomp {

enum class CompositionRule {
    // baselines
    VerbOnly,
    Fuzz,
    FuzzSwitched,
    Phaser,
    PhaserSwitched,
    // dimension-normalized models
    Mult,
    TracedNoun,
    TracedVerb,
    Diag,
    SummedNoun,
    SummedVerb,
    DiagVerb,
    DiagNoun,
    TracedAddition,
    SummedAddition,
    // unnormalized structural closed forms
    RawTrNV,
    RawTrNVIdentity,
    RawTrVN,
    RawDiagDiag,
    RawMNSumV,
    RawMTrNVJ,
    RawMVSumN,
    RawTrNSumVJ,
    RawISumNSumV,
    RawTrVSumNJ,
    RawDiagProdTraceJ,
    RawSumNDiagV,
    RawSumVDiagN,
    RawMult,
    RawFourSpider,
};

struct RuleInfo {
    CompositionRule id;
    std::string name;      // stable lowercase-hyphen id for CLI/config
    bool bilinear;         // linear in both arguments
    bool compr_family;     // one of the ten dimension-normalized models
    bool degenerate;       // maps every input pair to a multiple of I or J
};

const std::vector<RuleInfo>& rule_registry();
const RuleInfo& rule_info(CompositionRule rule);
CompositionRule rule_from_name(const std::string& name);  // UnknownRule
const std::string& rule_name(CompositionRule rule);

// All ten dimension-normalized models (TracedNoun .. SummedAddition, Mult).
std::vector<CompositionRule> compr_family_rules();

// Kraus operators of shape (m^2, m) realizing v -> sum_l K_l v K_l^T.
struct KrausSet {
    Eigen::Index m;
    std::vector<Matrix> operators;
};

// Matrix of a linear map M_in -> M_out under the basis-action isomorphism
// C = sum_ij Phi(E_ij) (x) E_ij, indexed (out (x) in).
struct ChoiMatrix {
    Eigen::Index in_dim;
    Eigen::Index out_dim;
    Matrix entries;
};

// Evaluate a composition rule on psd inputs of equal dimension. Result is
// certified psd within tolerance.
PsdMatrix compose(CompositionRule rule, const PsdMatrix& n, const PsdMatrix& v,
                  const Tolerance& tol = {});

// Closed-form evaluation on arbitrary (not necessarily symmetric or psd)
// matrices; defined for bilinear rules only. Traces tr(nv) in closed forms
// are extended as the Frobenius pairing sum_ij n_ij v_ij, which agrees on
// symmetric arguments and is the extension realized by the Kraus forms.
Matrix eval_bilinear(CompositionRule rule, const Matrix& n, const Matrix& v);

// sum_l K_l v K_l^T as an m^2 x m^2 Choi matrix (in_dim m, out_dim m).
ChoiMatrix kraus_apply(const KrausSet& kraus, const PsdMatrix& v);

// Recover Phi(n) = Tr_2( C (I (x) n^T) ) from a Choi matrix.
Matrix apply_choi(const ChoiMatrix& choi, const Matrix& n);

// Choi matrix of n -> compose(rule, n, v), assembled by basis action.
ChoiMatrix choi_of_rule(CompositionRule rule, const PsdMatrix& v);

// Structural Kraus realization of the outer map v -> choi_of_rule(rule, v).
// Throws NotStructural for VerbOnly and the Fuzz/Phaser variants.
KrausSet kraus_for_rule(CompositionRule rule, Eigen::Index m);

// Choi matrix of the outer map v -> choi_of_rule(rule, v); size m^3 x m^3.
ChoiMatrix outer_choi_of_rule(CompositionRule rule, Eigen::Index m);

// Checks that `trials` random inner Choi matrices and the outer-map Choi
// matrix are all psd.
bool is_completely_positive(CompositionRule rule, Eigen::Index m, int trials,
                            const Tolerance& tol = {}, std::uint64_t seed = 0);

// One-sided sampled test of block positivity: false iff some random unit
// product vector gives a quadratic form below -tol.
bool block_positive_sampled(const ChoiMatrix& choi, int samples, double tol,
                            std::uint64_t seed = 0);

// Seeded random psd matrix G^T G with standard normal G.
PsdMatrix random_psd(Eigen::Index m, std::mt19937_64& rng);

Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace psdcomp

#endif
