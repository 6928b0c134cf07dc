#include "psdcomp/verify.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "psdcomp/hyponymy.hpp"

namespace psdcomp {

namespace {

std::vector<CompositionRule> positivity_rules() {
    auto rules = compr_family_rules();
    rules.push_back(CompositionRule::Fuzz);
    rules.push_back(CompositionRule::FuzzSwitched);
    rules.push_back(CompositionRule::Phaser);
    rules.push_back(CompositionRule::PhaserSwitched);
    return rules;
}

double rel_err(const Matrix& a, const Matrix& b) {
    double denom = std::max(1e-300, std::max(a.norm(), b.norm()));
    return (a - b).norm() / denom;
}

}  // namespace

bool VerifyReport::all_passed() const {
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

PropertyResult check_positivity(Eigen::Index m, int trials,
                                std::uint64_t seed, const Tolerance& tol) {
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        PsdMatrix n = random_psd(m, rng);
        PsdMatrix v = random_psd(m, rng);
        for (CompositionRule rule : positivity_rules()) {
            try {
                PsdMatrix out = compose(rule, n, v, tol);
                if (!is_psd(out.entries(), tol))
                    return {"positivity m=" + std::to_string(m), false,
                            "rule " + rule_name(rule) + " trial " +
                                std::to_string(t)};
            } catch (const NotPsd&) {
                return {"positivity m=" + std::to_string(m), false,
                        "rule " + rule_name(rule) + " produced non-psd, trial " +
                            std::to_string(t)};
            }
        }
    }
    return {"positivity m=" + std::to_string(m), true, ""};
}

PropertyResult check_bilinearity(Eigen::Index m, int trials,
                                 std::uint64_t seed, double rel_tol) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.1, 3.0);
    for (int t = 0; t < trials; ++t) {
        Matrix n = random_psd(m, rng).entries();
        Matrix n2 = random_psd(m, rng).entries();
        Matrix v = random_psd(m, rng).entries();
        Matrix v2 = random_psd(m, rng).entries();
        double alpha = unif(rng);
        for (CompositionRule rule : compr_family_rules()) {
            double worst = 0;
            worst = std::max(worst,
                             rel_err(eval_bilinear(rule, alpha * n, v),
                                     alpha * eval_bilinear(rule, n, v)));
            worst = std::max(worst,
                             rel_err(eval_bilinear(rule, n, alpha * v),
                                     alpha * eval_bilinear(rule, n, v)));
            worst = std::max(
                worst, rel_err(eval_bilinear(rule, n + n2, v),
                               eval_bilinear(rule, n, v) +
                                   eval_bilinear(rule, n2, v)));
            worst = std::max(
                worst, rel_err(eval_bilinear(rule, n, v + v2),
                               eval_bilinear(rule, n, v) +
                                   eval_bilinear(rule, n, v2)));
            if (worst > rel_tol)
                return {"bilinearity m=" + std::to_string(m), false,
                        "rule " + rule_name(rule) + " relative error " +
                            std::to_string(worst)};
        }
    }
    return {"bilinearity m=" + std::to_string(m), true, ""};
}

PropertyResult check_hyponymy_preservation(Eigen::Index m, int trials,
                                           std::uint64_t seed,
                                           const Tolerance& tol) {
    std::mt19937_64 rng(seed);
    for (int t = 0; t < trials; ++t) {
        PsdMatrix n1 = random_psd(m, rng);
        PsdMatrix v1 = random_psd(m, rng);
        PsdMatrix n2 = n1 + random_psd(m, rng);
        PsdMatrix v2 = v1 + random_psd(m, rng);
        for (CompositionRule rule : compr_family_rules()) {
            PsdMatrix lo = compose(rule, n1, v1, tol);
            PsdMatrix hi = compose(rule, n2, v2, tol);
            if (!loewner_leq(lo, hi, tol))
                return {"hyponymy-preservation m=" + std::to_string(m), false,
                        "rule " + rule_name(rule) + " trial " +
                            std::to_string(t)};
        }
    }
    return {"hyponymy-preservation m=" + std::to_string(m), true, ""};
}

PropertyResult check_cp_certification(Eigen::Index m, std::uint64_t seed,
                                      const Tolerance& tol) {
    std::mt19937_64 rng(seed);
    Tolerance cp_tol = tol;
    cp_tol.psd_tol = 1e-8;
    for (const auto& info : rule_registry()) {
        if (!info.bilinear) continue;
        if (!is_completely_positive(info.id, m, 5, cp_tol, seed))
            return {"cp-certification m=" + std::to_string(m), false,
                    "rule " + info.name + " failed the Choi psd check"};
        // Kraus/Choi round trip against the closed form
        KrausSet kraus = kraus_for_rule(info.id, m);
        for (int t = 0; t < 3; ++t) {
            PsdMatrix n = random_psd(m, rng);
            PsdMatrix v = random_psd(m, rng);
            Matrix via_kraus = apply_choi(kraus_apply(kraus, v), n.entries());
            Matrix direct = eval_bilinear(info.id, n.entries(), v.entries());
            double scale = std::max(1.0, direct.norm());
            if ((via_kraus - direct).norm() > 1e-8 * scale)
                return {"cp-certification m=" + std::to_string(m), false,
                        "rule " + info.name + " Kraus/Choi round trip error " +
                            std::to_string((via_kraus - direct).norm())};
        }
    }
    return {"cp-certification m=" + std::to_string(m), true, ""};
}

std::optional<Witness> find_order_violation(CompositionRule rule,
                                            Eigen::Index max_m, int max_trials,
                                            std::uint64_t seed,
                                            const Tolerance& tol) {
    std::mt19937_64 rng(seed);
    for (int t = 0; t < max_trials; ++t) {
        Eigen::Index m = 2 + Eigen::Index(t) % (max_m - 1);
        PsdMatrix n1 = random_psd(m, rng);
        PsdMatrix v1 = random_psd(m, rng);
        PsdMatrix n2 = n1 + random_psd(m, rng);
        PsdMatrix v2 = v1 + random_psd(m, rng);
        PsdMatrix lo = compose(rule, n1, v1, tol);
        PsdMatrix hi = compose(rule, n2, v2, tol);
        if (!loewner_leq(lo, hi, tol))
            return Witness{rule, n1.entries(), n2.entries(), v1.entries(),
                           v2.entries(), "order"};
    }
    return std::nullopt;
}

std::optional<Witness> find_additivity_violation(CompositionRule rule,
                                                 Eigen::Index max_m,
                                                 int max_trials,
                                                 std::uint64_t seed,
                                                 double rel_tol) {
    std::mt19937_64 rng(seed);
    Tolerance tol;
    for (int t = 0; t < max_trials; ++t) {
        Eigen::Index m = 2 + Eigen::Index(t) % (max_m - 1);
        PsdMatrix n = random_psd(m, rng);
        PsdMatrix v = random_psd(m, rng);
        PsdMatrix v2 = random_psd(m, rng);
        Matrix sum_then = compose(rule, n, v + v2, tol).entries();
        Matrix then_sum = compose(rule, n, v, tol).entries() +
                          compose(rule, n, v2, tol).entries();
        if (rel_err(sum_then, then_sum) > rel_tol)
            return Witness{rule, n.entries(), n.entries(), v.entries(),
                           v2.entries(), "additivity"};
    }
    return std::nullopt;
}

bool replay_witness(const Witness& witness, const Tolerance& tol) {
    if (witness.property == "order") {
        PsdMatrix lo = compose(witness.rule, PsdMatrix(witness.n1, tol),
                               PsdMatrix(witness.v1, tol), tol);
        PsdMatrix hi = compose(witness.rule, PsdMatrix(witness.n2, tol),
                               PsdMatrix(witness.v2, tol), tol);
        return !loewner_leq(lo, hi, tol);
    }
    if (witness.property == "additivity") {
        PsdMatrix n(witness.n1, tol);
        PsdMatrix v(witness.v1, tol);
        PsdMatrix v2(witness.v2, tol);
        Matrix sum_then = compose(witness.rule, n, v + v2, tol).entries();
        Matrix then_sum = compose(witness.rule, n, v, tol).entries() +
                          compose(witness.rule, n, v2, tol).entries();
        return rel_err(sum_then, then_sum) > 1e-6;
    }
    throw FormatError("unknown witness property '" + witness.property + "'");
}

namespace {

void write_matrix(std::ostream& out, const Matrix& m) {
    out << m.rows() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << " ";
            out << m(i, j);
        }
        out << "\n";
    }
}

Matrix read_matrix(std::istream& in, const std::string& path) {
    Eigen::Index n = 0;
    if (!(in >> n) || n <= 0)
        throw FormatError(path + ": bad matrix header in witness file");
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (!(in >> m(i, j)))
                throw FormatError(path + ": truncated witness matrix");
    return m;
}

}  // namespace

void save_witness(const Witness& witness, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    out << std::setprecision(17);
    out << "psdcomp-witness 1\n";
    out << rule_name(witness.rule) << " " << witness.property << "\n";
    write_matrix(out, witness.n1);
    write_matrix(out, witness.n2);
    write_matrix(out, witness.v1);
    write_matrix(out, witness.v2);
}

Witness load_witness(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open witness file " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (!in || magic != "psdcomp-witness" || version != 1)
        throw FormatError(path + ": not a witness file");
    std::string rule, property;
    in >> rule >> property;
    Witness w;
    w.rule = rule_from_name(rule);
    w.property = property;
    w.n1 = read_matrix(in, path);
    w.n2 = read_matrix(in, path);
    w.v1 = read_matrix(in, path);
    w.v2 = read_matrix(in, path);
    return w;
}

VerifyReport run_verification(Eigen::Index max_m, int trials,
                              std::uint64_t seed, const Tolerance& tol) {
    if (trials < 1) throw InvalidMatrix("trials must be >= 1");
    if (max_m < 2) throw InvalidMatrix("dimension must be >= 2");
    VerifyReport report;
    for (Eigen::Index m = 2; m <= max_m; ++m) {
        report.results.push_back(check_positivity(m, trials, seed, tol));
        report.results.push_back(check_bilinearity(m, trials, seed));
        report.results.push_back(
            check_hyponymy_preservation(m, trials, seed, tol));
        report.results.push_back(check_cp_certification(m, seed, tol));
    }
    // Fuzz and Phaser must each yield a concrete order and additivity
    // violation; failing to find one is itself a suite failure.
    for (CompositionRule rule :
         {CompositionRule::Fuzz, CompositionRule::Phaser}) {
        auto order = find_order_violation(rule, std::min<Eigen::Index>(max_m, 3),
                                          10000, seed, tol);
        report.results.push_back(
            {"counterexample-order " + rule_name(rule), order.has_value(),
             order ? "witness found" : "no witness in 10000 trials"});
        if (order) report.witnesses.push_back(*order);
        auto add = find_additivity_violation(
            rule, std::min<Eigen::Index>(max_m, 3), 10000, seed);
        report.results.push_back(
            {"counterexample-additivity " + rule_name(rule), add.has_value(),
             add ? "witness found" : "no witness in 10000 trials"});
        if (add) report.witnesses.push_back(*add);
    }
    return report;
}

void print_report(const VerifyReport& report, std::ostream& out) {
    for (const auto& r : report.results) {
        out << (r.passed ? "PASS" : "FAIL") << "  " << r.name;
        if (!r.detail.empty()) out << "  (" << r.detail << ")";
        out << "\n";
    }
    out << (report.all_passed() ? "all checks passed" : "FAILURES present")
        << "\n";
}

}  // namespace psdcomp
