#ifndef PSDCOMP_VERIFY_HPP
#define PSDCOMP_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "psdcomp/compose.hpp"

namespace psdcomp {

// A quadruple n1 <= n2, v1 <= v2 witnessing a property violation of a rule.
struct Witness {
    CompositionRule rule;
    Matrix n1, n2, v1, v2;
    std::string property;  // "order" or "additivity"
};

struct PropertyResult {
    std::string name;
    bool passed;
    std::string detail;
};

struct VerifyReport {
    std::vector<PropertyResult> results;
    std::vector<Witness> witnesses;  // found Fuzz/Phaser counterexamples
    bool all_passed() const;
};

// Positivity preservation over `trials` random psd pairs for every
// dimension-normalized model plus the Fuzz/Phaser baselines.
PropertyResult check_positivity(Eigen::Index m, int trials,
                                std::uint64_t seed, const Tolerance& tol = {});

// Bilinearity of every Compr-family rule within relative Frobenius error
// `rel_tol`.
PropertyResult check_bilinearity(Eigen::Index m, int trials,
                                 std::uint64_t seed, double rel_tol = 1e-9);

// Loewner-order preservation on random nested pairs for every Compr-family
// rule.
PropertyResult check_hyponymy_preservation(Eigen::Index m, int trials,
                                           std::uint64_t seed,
                                           const Tolerance& tol = {});

// Inner and outer Choi matrices psd for every bilinear rule, plus the
// Kraus/Choi round trip against the closed forms.
PropertyResult check_cp_certification(Eigen::Index m, std::uint64_t seed,
                                      const Tolerance& tol = {});

// Randomized search for a quadruple where `rule` breaks order preservation.
std::optional<Witness> find_order_violation(CompositionRule rule,
                                            Eigen::Index max_m, int max_trials,
                                            std::uint64_t seed,
                                            const Tolerance& tol = {});

// Randomized search for v, v' with rule(n, v+v') != rule(n, v) + rule(n, v').
std::optional<Witness> find_additivity_violation(CompositionRule rule,
                                                 Eigen::Index max_m,
                                                 int max_trials,
                                                 std::uint64_t seed,
                                                 double rel_tol = 1e-6);

// Replays a stored witness; true iff it still violates the property.
bool replay_witness(const Witness& witness, const Tolerance& tol = {});

void save_witness(const Witness& witness, const std::string& path);
Witness load_witness(const std::string& path);

// The full suite for dimensions 2..max_m: positivity, bilinearity, hyponymy
// preservation, CP certification, and the Fuzz/Phaser counterexample
// searches.
VerifyReport run_verification(Eigen::Index max_m, int trials,
                              std::uint64_t seed, const Tolerance& tol = {});

void print_report(const VerifyReport& report, std::ostream& out);

}  // namespace psdcomp

#endif
