#ifndef PSDCOMP_EVAL_HPP
#define PSDCOMP_EVAL_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "psdcomp/compose.hpp"
#include "psdcomp/hyponymy.hpp"
#include "psdcomp/lexicon.hpp"

namespace psdcomp {

enum class PhraseType { SV, VO, SVO };

PhraseType phrase_type_from_name(const std::string& name);  // sv | vo | svo
const std::string& phrase_type_name(PhraseType t);
int phrase_token_count(PhraseType t);

struct PhrasePair {
    std::vector<std::string> left;
    std::vector<std::string> right;
    bool label;  // true: left entails right
};

struct EntailmentDataset {
    std::string name;
    PhraseType phrase_type;
    std::vector<PhrasePair> pairs;
};

// TSV lines `left phrase<TAB>right phrase<TAB>true|false`; token counts are
// validated against the phrase type.
EntailmentDataset load_dataset(const std::string& path, PhraseType type);

// SV: compose(subject, verb); VO: compose(object, verb); SVO: the verb and
// object are combined first, then the result acts as the verb for the
// subject.
PsdMatrix compose_phrase(const std::vector<std::string>& tokens,
                         PhraseType type, CompositionRule rule,
                         const MatrixStore& store, const Tolerance& tol = {});

double score_pair(const PhrasePair& pair, PhraseType type,
                  CompositionRule rule, Measure measure,
                  const MatrixStore& store, const Tolerance& tol = {});

// Rank-based (Mann-Whitney) AUC; a tie between a positive and a negative
// score counts 1/2. Throws DegenerateLabels when only one class is present.
double roc_auc(const std::vector<double>& scores,
               const std::vector<bool>& labels);

// AUC over `reps` same-size resamples with replacement. Each repetition
// draws from its own engine seeded by (seed, rep), so results do not depend
// on scheduling. Single-class resamples are redrawn a bounded number of
// times.
std::vector<double> bootstrap_auc(const std::vector<double>& scores,
                                  const std::vector<bool>& labels, int reps,
                                  std::uint64_t seed);

// Two-sided p-value, unequal-variance t statistic, Welch-Satterthwaite
// degrees of freedom. Degenerate zero-variance inputs: p = 1 for equal
// means, p = 0 otherwise.
double welch_t_test(const std::vector<double>& a,
                    const std::vector<double>& b);

double bonferroni(double p, int comparisons);

struct EvalConfig {
    struct DatasetSpec {
        std::string name;
        std::string path;
        PhraseType type;
    };
    std::vector<DatasetSpec> datasets;
    std::vector<CompositionRule> rules;
    std::vector<Measure> measures;
    int reps = 100;
    std::uint64_t seed = 0;
    std::string store_path;
};

// Parsed from JSON with keys datasets, rules, measures, reps, seed,
// store_path.
EvalConfig load_config(const std::string& path);

struct ReportRow {
    std::string dataset;
    CompositionRule rule;
    Measure measure;
    double mean_auc;
    double std_auc;
    double p_vs_fuzz;    // max Bonferroni-adjusted p over both Fuzz variants
    double p_vs_phaser;  // likewise for the Phaser variants
    std::string flags;   // '*' better than both Fuzz, '+' both Phaser
};

struct EvalReport {
    std::vector<ReportRow> rows;

    std::string to_text() const;  // aligned table
    std::string to_csv() const;
};

EvalReport run_table(const EvalConfig& config, const MatrixStore& store,
                     const Tolerance& tol = {});

}  // namespace psdcomp

#endif
