#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "oracle.hpp"
#include "psdcomp/eval.hpp"
#include "synthetic.hpp"

using namespace psdcomp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("psdcomp-eval-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) {
        fs::path p = path / name;
        std::ofstream(p) << content;
        return p.string();
    }
};

}  // namespace

TEST_CASE("load_dataset parses the documented format") {
    TempDir tmp;
    auto path = tmp.file("sv.tsv",
                         "summer finish\tseason end\ttrue\n"
                         "season end\tsummer finish\tfalse\n");
    EntailmentDataset ds = load_dataset(path, PhraseType::SV);
    REQUIRE(ds.pairs.size() == 2);
    CHECK(ds.pairs[0].label);
    CHECK(ds.pairs[0].left == std::vector<std::string>{"summer", "finish"});
    CHECK_FALSE(ds.pairs[1].label);
}

TEST_CASE("load_dataset validates token counts and labels") {
    TempDir tmp;
    CHECK_THROWS_AS(
        load_dataset(tmp.file("bad.tsv", "a b c\td e\ttrue\n"),
                     PhraseType::SV),
        FormatError);
    CHECK_THROWS_AS(
        load_dataset(tmp.file("lab.tsv", "a b\tc d\tmaybe\n"), PhraseType::SV),
        FormatError);
    CHECK_THROWS_AS(load_dataset(tmp.file("empty.tsv", ""), PhraseType::SV),
                    FormatError);
}

TEST_CASE("compose_phrase follows grammatical types") {
    std::mt19937_64 rng(0);
    Eigen::Index m = 4;
    MatrixStore store(m);
    store.put("dog", random_psd(m, rng));
    store.put("chase", random_psd(m, rng));
    store.put("cat", random_psd(m, rng));

    SUBCASE("verb-only SV returns the verb matrix") {
        PsdMatrix out = compose_phrase({"dog", "chase"}, PhraseType::SV,
                                       CompositionRule::VerbOnly, store);
        CHECK((out.entries() - store.get("chase").entries()).norm() == 0.0);
    }
    SUBCASE("VO with Mult is object (.) verb") {
        PsdMatrix out = compose_phrase({"chase", "cat"}, PhraseType::VO,
                                       CompositionRule::Mult, store);
        Matrix want = store.get("cat").entries().cwiseProduct(
            store.get("chase").entries());
        CHECK((out.entries() - want).norm() < 1e-12);
    }
    SUBCASE("SVO with traced-verb nests verb-object first") {
        PsdMatrix out = compose_phrase({"dog", "chase", "cat"},
                                       PhraseType::SVO,
                                       CompositionRule::TracedVerb, store);
        Matrix want = store.get("chase").entries().trace() *
                      store.get("cat").entries().trace() / double(m * m) *
                      store.get("dog").entries();
        CHECK((out.entries() - want).norm() < 1e-9 * want.norm());
    }
    SUBCASE("missing token") {
        CHECK_THROWS_AS(compose_phrase({"dog", "eat"}, PhraseType::SV,
                                       CompositionRule::Mult, store),
                        MissingWord);
    }
}

TEST_CASE("score_pair on crisp and reversed pairs") {
    std::mt19937_64 rng(1);
    Eigen::Index m = 4;
    MatrixStore store(m);
    PsdMatrix n = random_psd(m, rng), v = random_psd(m, rng);
    store.put("na", n);
    store.put("nb", n + random_psd(m, rng));
    store.put("va", v);
    store.put("vb", v + random_psd(m, rng));

    PhrasePair same{{"na", "va"}, {"na", "va"}, true};
    CHECK(score_pair(same, PhraseType::SV, CompositionRule::Mult, Measure::kE,
                     store) == doctest::Approx(1.0));
    PhrasePair up{{"na", "va"}, {"nb", "vb"}, true};
    CHECK(score_pair(up, PhraseType::SV, CompositionRule::TracedNoun,
                     Measure::kE, store) == doctest::Approx(1.0));
    PhrasePair down{{"nb", "vb"}, {"na", "va"}, false};
    CHECK(score_pair(down, PhraseType::SV, CompositionRule::TracedNoun,
                     Measure::kE, store) < 1.0);
}

TEST_CASE("roc_auc boundary values") {
    CHECK(roc_auc({0.9, 0.8, 0.2, 0.1}, {true, true, false, false}) == 1.0);
    CHECK(roc_auc({0.5, 0.5, 0.5, 0.5}, {true, true, false, false}) == 0.5);
    CHECK(roc_auc({0.1, 0.2, 0.8, 0.9}, {true, true, false, false}) == 0.0);
    CHECK_THROWS_AS(roc_auc({0.1, 0.2}, {true, true}), DegenerateLabels);
}

TEST_CASE("roc_auc properties") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unif(0, 1);
    std::bernoulli_distribution coin(0.5);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> scores;
        std::vector<bool> labels;
        bool pos = false, neg = false;
        for (int i = 0; i < 20; ++i) {
            scores.push_back(std::round(unif(rng) * 10) / 10);  // force ties
            labels.push_back(coin(rng));
            (labels.back() ? pos : neg) = true;
        }
        if (!pos || !neg) continue;
        double auc = roc_auc(scores, labels);
        // brute-force all-pairs oracle
        CHECK(auc == doctest::Approx(oracle::roc_auc(scores, labels))
                         .epsilon(1e-12));
        // invariance under a strictly increasing transform
        std::vector<double> warped;
        for (double s : scores) warped.push_back(std::exp(3 * s) - 1);
        CHECK(roc_auc(warped, labels) == doctest::Approx(auc).epsilon(1e-12));
        // complement labels
        std::vector<bool> flipped;
        for (bool l : labels) flipped.push_back(!l);
        CHECK(auc + roc_auc(scores, flipped) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("bootstrap_auc determinism and consistency") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0, 1);
    std::vector<double> scores;
    std::vector<bool> labels;
    for (int i = 0; i < 100; ++i) {
        bool pos = i % 2 == 0;
        labels.push_back(pos);
        scores.push_back(unif(rng) + (pos ? 0.3 : 0.0));
    }
    auto a = bootstrap_auc(scores, labels, 100, 17);
    auto b = bootstrap_auc(scores, labels, 100, 17);
    CHECK(a == b);  // byte-identical across runs
    auto c = bootstrap_auc(scores, labels, 100, 18);
    CHECK(a != c);
    double plain = roc_auc(scores, labels);
    double mean = std::accumulate(a.begin(), a.end(), 0.0) / double(a.size());
    CHECK(std::abs(mean - plain) < 0.05);
}

TEST_CASE("bootstrap_auc of separated data is all ones") {
    std::vector<double> scores;
    std::vector<bool> labels;
    for (int i = 0; i < 40; ++i) {
        labels.push_back(i < 20);
        scores.push_back(i < 20 ? 1.0 : 0.0);
    }
    for (double auc : bootstrap_auc(scores, labels, 50, 0))
        CHECK(auc == 1.0);
}

TEST_CASE("bootstrap_auc rejects hopeless datasets") {
    // a single pair cannot yield two classes often enough
    CHECK_THROWS_AS(bootstrap_auc({1.0, 0.0}, {true, true}, 5, 0),
                    DegenerateLabels);
    CHECK_THROWS_AS(bootstrap_auc({1.0}, {true}, 0, 0), DegenerateLabels);
}

TEST_CASE("welch_t_test") {
    std::vector<double> a{0.1, 0.2, 0.3}, b{0.4, 0.5, 0.6};
    // reference oracle value computed independently: 0.0217
    CHECK(std::abs(welch_t_test(a, b) - 0.0217) < 1e-3);
    CHECK(welch_t_test(a, a) == 1.0);
    CHECK(welch_t_test({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}) == 0.0);
    CHECK(welch_t_test({0.0, 0.0}, {0.0, 0.0}) == 1.0);
    CHECK_THROWS_AS(welch_t_test({1.0}, a), DegenerateLabels);
}

TEST_CASE("bonferroni") {
    CHECK(bonferroni(0.005, 2) == doctest::Approx(0.01));
    CHECK(bonferroni(0.9, 5) == 1.0);
    CHECK(bonferroni(0.03, 1) == doctest::Approx(0.03));
    CHECK_THROWS(bonferroni(1.5, 2));
}

TEST_CASE("run_table on a synthetic dataset") {
    TempDir tmp;
    MatrixStore store(6);
    EntailmentDataset ds;
    synthetic::make_dataset(PhraseType::SV, 20, 6, 5, store, ds);
    auto ds_path = (tmp.path / "sv.tsv").string();
    synthetic::write_dataset_tsv(ds, ds_path);

    SUBCASE("one-cell report") {
        EvalConfig cfg;
        cfg.datasets.push_back({"sv", ds_path, PhraseType::SV});
        cfg.rules = {CompositionRule::VerbOnly};
        cfg.measures = {Measure::kE};
        cfg.reps = 10;
        EvalReport report = run_table(cfg, store);
        REQUIRE(report.rows.size() == 1);
        CHECK(report.rows[0].rule == CompositionRule::VerbOnly);
        CHECK(report.rows[0].mean_auc > 0.5);
        CHECK(report.rows[0].mean_auc < 1.0);
    }
    SUBCASE("Compr-family rules dominate the verb-only baseline") {
        EvalConfig cfg;
        cfg.datasets.push_back({"sv", ds_path, PhraseType::SV});
        cfg.rules = compr_family_rules();
        cfg.rules.push_back(CompositionRule::VerbOnly);
        cfg.measures = {Measure::kE, Measure::kBA};
        cfg.reps = 20;
        EvalReport report = run_table(cfg, store);
        double verb_only = -1;
        for (const auto& row : report.rows)
            if (row.rule == CompositionRule::VerbOnly &&
                row.measure == Measure::kE)
                verb_only = row.mean_auc;
        for (const auto& row : report.rows)
            if (row.rule != CompositionRule::VerbOnly)
                CHECK(row.mean_auc >= verb_only);
    }
    SUBCASE("reports serialize to text and csv") {
        EvalConfig cfg;
        cfg.datasets.push_back({"sv", ds_path, PhraseType::SV});
        cfg.rules = {CompositionRule::Mult, CompositionRule::VerbOnly};
        cfg.measures = {Measure::kBA};
        cfg.reps = 5;
        EvalReport report = run_table(cfg, store);
        std::string text = report.to_text();
        CHECK(text.find("mult") != std::string::npos);
        std::string csv = report.to_csv();
        CHECK(csv.find("dataset,rule,measure,mean_auc,std,p_vs_fuzz,"
                       "p_vs_phaser,flags") == 0);
        CHECK(csv.find("sv,mult,kba,") != std::string::npos);
        // determinism: rebuilding the report yields identical bytes
        CHECK(run_table(cfg, store).to_csv() == csv);
    }
}

TEST_CASE("load_config") {
    TempDir tmp;
    auto store_path = (tmp.path / "store.txt").string();
    auto cfg_path = tmp.file("cfg.json", R"({
        "datasets": [{"path": "sv.tsv", "type": "sv", "name": "sv"}],
        "rules": ["mult", "traced-noun"],
        "measures": ["ke", "kba"],
        "seed": 7,
        "store_path": ")" + store_path + R"("
    })");
    EvalConfig cfg = load_config(cfg_path);
    CHECK(cfg.reps == 100);  // default when omitted
    CHECK(cfg.seed == 7);
    CHECK(cfg.rules.size() == 2);
    CHECK(cfg.measures.size() == 2);
    REQUIRE(cfg.datasets.size() == 1);
    CHECK(cfg.datasets[0].type == PhraseType::SV);
    CHECK_THROWS_AS(load_config(tmp.file("bad.json", "{")), FormatError);
    CHECK_THROWS_AS(load_config(tmp.file("norules.json", "{}")), FormatError);
}
