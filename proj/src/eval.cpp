#include "psdcomp/eval.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace psdcomp {

namespace {

std::vector<std::string> tokenize(const std::string& phrase) {
    std::vector<std::string> out;
    std::istringstream ss(phrase);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

PhraseType phrase_type_from_name(const std::string& name) {
    if (name == "sv") return PhraseType::SV;
    if (name == "vo") return PhraseType::VO;
    if (name == "svo") return PhraseType::SVO;
    throw FormatError("unknown phrase type '" + name + "'; valid: sv vo svo");
}

const std::string& phrase_type_name(PhraseType t) {
    static const std::string sv = "sv", vo = "vo", svo = "svo";
    switch (t) {
        case PhraseType::SV: return sv;
        case PhraseType::VO: return vo;
        default: return svo;
    }
}

int phrase_token_count(PhraseType t) {
    return t == PhraseType::SVO ? 3 : 2;
}

EntailmentDataset load_dataset(const std::string& path, PhraseType type) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open dataset file " + path);
    EntailmentDataset ds;
    ds.name = std::filesystem::path(path).stem().string();
    ds.phrase_type = type;
    std::string line;
    std::size_t lineno = 0;
    const int want = phrase_token_count(type);
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw FormatError(path + ":" + std::to_string(lineno) +
                              ": expected `left<TAB>right<TAB>true|false`");
        PhrasePair pair;
        pair.left = tokenize(line.substr(0, t1));
        pair.right = tokenize(line.substr(t1 + 1, t2 - t1 - 1));
        std::string label = line.substr(t2 + 1);
        while (!label.empty() && (label.back() == '\r' || label.back() == ' '))
            label.pop_back();
        if (label == "true")
            pair.label = true;
        else if (label == "false")
            pair.label = false;
        else
            throw FormatError(path + ":" + std::to_string(lineno) +
                              ": bad label '" + label + "'");
        if (int(pair.left.size()) != want || int(pair.right.size()) != want)
            throw FormatError(path + ":" + std::to_string(lineno) +
                              ": phrase type " + phrase_type_name(type) +
                              " needs " + std::to_string(want) + " tokens");
        ds.pairs.push_back(std::move(pair));
    }
    if (ds.pairs.empty()) throw FormatError(path + ": empty dataset");
    return ds;
}

PsdMatrix compose_phrase(const std::vector<std::string>& tokens,
                         PhraseType type, CompositionRule rule,
                         const MatrixStore& store, const Tolerance& tol) {
    if (int(tokens.size()) != phrase_token_count(type))
        throw FormatError("phrase has wrong token count for type " +
                          phrase_type_name(type));
    switch (type) {
        case PhraseType::SV:
            return compose(rule, store.get(tokens[0]), store.get(tokens[1]),
                           tol);
        case PhraseType::VO:
            // composition follows grammatical type: the object is the noun
            return compose(rule, store.get(tokens[1]), store.get(tokens[0]),
                           tol);
        default: {
            PsdMatrix vp = compose(rule, store.get(tokens[2]),
                                   store.get(tokens[1]), tol);
            return compose(rule, store.get(tokens[0]), vp, tol);
        }
    }
}

double score_pair(const PhrasePair& pair, PhraseType type,
                  CompositionRule rule, Measure measure,
                  const MatrixStore& store, const Tolerance& tol) {
    PsdMatrix left = compose_phrase(pair.left, type, rule, store, tol);
    PsdMatrix right = compose_phrase(pair.right, type, rule, store, tol);
    return score(measure, left, right, tol);
}

double roc_auc(const std::vector<double>& scores,
               const std::vector<bool>& labels) {
    if (scores.size() != labels.size())
        throw DimensionError("roc_auc: scores/labels length mismatch");
    std::size_t n = scores.size();
    std::size_t pos = std::size_t(std::count(labels.begin(), labels.end(),
                                             true));
    std::size_t neg = n - pos;
    if (pos == 0 || neg == 0)
        throw DegenerateLabels("roc_auc needs both classes");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] < scores[b];
    });
    // average ranks over tie groups; rank-sum of positives gives U
    double rank_sum_pos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        double avg_rank = 0.5 * double(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]]) rank_sum_pos += avg_rank;
        i = j;
    }
    double u = rank_sum_pos - 0.5 * double(pos) * double(pos + 1);
    return u / (double(pos) * double(neg));
}

std::vector<double> bootstrap_auc(const std::vector<double>& scores,
                                  const std::vector<bool>& labels, int reps,
                                  std::uint64_t seed) {
    if (reps < 1) throw DegenerateLabels("bootstrap needs reps >= 1");
    const std::size_t n = scores.size();
    constexpr int kMaxRetries = 100;
    std::vector<double> out;
    out.reserve(std::size_t(reps));
    for (int rep = 0; rep < reps; ++rep) {
        std::mt19937_64 rng(splitmix64(seed) ^
                            splitmix64(std::uint64_t(rep) + 1));
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<double> s(n);
        std::vector<bool> l(n);
        int tries = 0;
        for (;;) {
            bool has_pos = false, has_neg = false;
            for (std::size_t k = 0; k < n; ++k) {
                std::size_t idx = pick(rng);
                s[k] = scores[idx];
                l[k] = labels[idx];
                (l[k] ? has_pos : has_neg) = true;
            }
            if (has_pos && has_neg) break;
            if (++tries >= kMaxRetries)
                throw DegenerateLabels(
                    "could not draw a two-class bootstrap resample");
        }
        out.push_back(roc_auc(s, l));
    }
    return out;
}

double welch_t_test(const std::vector<double>& a,
                    const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw DegenerateLabels("welch_t_test needs two samples of size >= 2");
    auto mean = [](const std::vector<double>& x) {
        return std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
    };
    auto var = [&](const std::vector<double>& x, double mu) {
        double s = 0;
        for (double xi : x) s += (xi - mu) * (xi - mu);
        return s / double(x.size() - 1);
    };
    double ma = mean(a), mb = mean(b);
    double va = var(a, ma), vb = var(b, mb);
    double na = double(a.size()), nb = double(b.size());
    double se2 = va / na + vb / nb;
    if (se2 == 0) return ma == mb ? 1.0 : 0.0;
    double t = (ma - mb) / std::sqrt(se2);
    double df = se2 * se2 /
                (va * va / (na * na * (na - 1)) + vb * vb / (nb * nb * (nb - 1)));
    boost::math::students_t_distribution<double> dist(df);
    return 2 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

double bonferroni(double p, int comparisons) {
    if (p < 0 || p > 1) throw InvalidMatrix("p-value outside [0,1]");
    if (comparisons < 1) throw InvalidMatrix("comparisons must be >= 1");
    return std::min(1.0, p * double(comparisons));
}

EvalConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config file " + path);
    EvalConfig cfg;
    try {
        nlohmann::json j;
        in >> j;
        for (const auto& d : j.at("datasets")) {
            EvalConfig::DatasetSpec spec;
            spec.path = d.at("path").get<std::string>();
            spec.type = phrase_type_from_name(d.at("type").get<std::string>());
            spec.name = d.value(
                "name", std::filesystem::path(spec.path).stem().string());
            cfg.datasets.push_back(std::move(spec));
        }
        for (const auto& r : j.at("rules"))
            cfg.rules.push_back(rule_from_name(r.get<std::string>()));
        for (const auto& m : j.at("measures"))
            cfg.measures.push_back(measure_from_name(m.get<std::string>()));
        cfg.reps = j.value("reps", 100);
        cfg.seed = j.value("seed", std::uint64_t(0));
        cfg.store_path = j.value("store_path", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
    return cfg;
}

EvalReport run_table(const EvalConfig& config, const MatrixStore& store,
                     const Tolerance& tol) {
    const std::vector<CompositionRule> fuzz_variants = {
        CompositionRule::Fuzz, CompositionRule::FuzzSwitched};
    const std::vector<CompositionRule> phaser_variants = {
        CompositionRule::Phaser, CompositionRule::PhaserSwitched};

    // every (model, baseline-family) test performed in the run
    int comparisons = int(config.datasets.size() * config.rules.size() *
                          config.measures.size() * 4);

    EvalReport report;
    for (const auto& dspec : config.datasets) {
        EntailmentDataset ds = load_dataset(dspec.path, dspec.type);
        std::vector<bool> labels;
        for (const auto& p : ds.pairs) labels.push_back(p.label);

        auto samples_for = [&](CompositionRule rule, Measure measure) {
            std::vector<double> scores;
            scores.reserve(ds.pairs.size());
            for (const auto& p : ds.pairs)
                scores.push_back(
                    score_pair(p, ds.phrase_type, rule, measure, store, tol));
            return bootstrap_auc(scores, labels, config.reps, config.seed);
        };

        for (Measure measure : config.measures) {
            std::vector<std::vector<double>> fuzz_samples, phaser_samples;
            for (auto r : fuzz_variants)
                fuzz_samples.push_back(samples_for(r, measure));
            for (auto r : phaser_variants)
                phaser_samples.push_back(samples_for(r, measure));

            for (CompositionRule rule : config.rules) {
                std::vector<double> samples = samples_for(rule, measure);
                double mu = std::accumulate(samples.begin(), samples.end(),
                                            0.0) /
                            double(samples.size());
                double sd = 0;
                for (double s : samples) sd += (s - mu) * (s - mu);
                sd = samples.size() > 1
                         ? std::sqrt(sd / double(samples.size() - 1))
                         : 0.0;

                auto compare = [&](const std::vector<std::vector<double>>&
                                       baselines) {
                    double worst_p = 0;
                    bool better = true;
                    for (const auto& base : baselines) {
                        double mb =
                            std::accumulate(base.begin(), base.end(), 0.0) /
                            double(base.size());
                        double p = bonferroni(welch_t_test(samples, base),
                                              comparisons);
                        worst_p = std::max(worst_p, p);
                        if (!(mu > mb && p < 0.01)) better = false;
                    }
                    return std::pair{worst_p, better};
                };
                auto [p_fuzz, star] = compare(fuzz_samples);
                auto [p_phaser, plus] = compare(phaser_samples);

                ReportRow row;
                row.dataset = dspec.name;
                row.rule = rule;
                row.measure = measure;
                row.mean_auc = mu;
                row.std_auc = sd;
                row.p_vs_fuzz = p_fuzz;
                row.p_vs_phaser = p_phaser;
                if (star) row.flags += "*";
                if (plus) row.flags += "+";
                report.rows.push_back(std::move(row));
            }
        }
    }
    return report;
}

std::string EvalReport::to_text() const {
    std::ostringstream out;
    out << std::left << std::setw(16) << "dataset" << std::setw(20) << "rule"
        << std::setw(8) << "measure" << std::right << std::setw(10) << "mean"
        << std::setw(10) << "std" << std::setw(12) << "p_fuzz"
        << std::setw(12) << "p_phaser"
        << "  flags\n";
    out << std::string(94, '-') << "\n";
    out << std::fixed << std::setprecision(4);
    for (const auto& r : rows) {
        out << std::left << std::setw(16) << r.dataset << std::setw(20)
            << rule_name(r.rule) << std::setw(8) << measure_name(r.measure)
            << std::right << std::setw(10) << r.mean_auc << std::setw(10)
            << r.std_auc << std::setw(12) << r.p_vs_fuzz << std::setw(12)
            << r.p_vs_phaser << "  " << r.flags << "\n";
    }
    return out.str();
}

std::string EvalReport::to_csv() const {
    std::ostringstream out;
    out << "dataset,rule,measure,mean_auc,std,p_vs_fuzz,p_vs_phaser,flags\n";
    out << std::fixed << std::setprecision(6);
    for (const auto& r : rows) {
        out << r.dataset << "," << rule_name(r.rule) << ","
            << measure_name(r.measure) << "," << r.mean_auc << "," << r.std_auc
            << "," << r.p_vs_fuzz << "," << r.p_vs_phaser << "," << r.flags
            << "\n";
    }
    return out.str();
}

}  // namespace psdcomp
