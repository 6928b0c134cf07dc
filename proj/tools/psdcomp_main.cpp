#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "psdcomp/eval.hpp"
#include "psdcomp/verify.hpp"

namespace {

using namespace psdcomp;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PSDCOMP_SEED"))
        return std::strtoull(env, nullptr, 10);
    return 0;
}

void print_matrix(const Matrix& m) {
    std::cout << std::setprecision(6);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) std::cout << " ";
            std::cout << m(i, j);
        }
        std::cout << "\n";
    }
}

int cmd_build(const std::string& embeddings_path,
              const std::string& lexicon_path, const std::string& out_path,
              std::optional<Eigen::Index> dim) {
    EmbeddingTable embeddings = load_embeddings(embeddings_path);
    if (dim && embeddings.dim != *dim) {
        std::cerr << "error: embeddings have dimension " << embeddings.dim
                  << ", expected " << *dim << "\n";
        return 2;
    }
    HyponymLexicon lexicon = load_lexicon(
        lexicon_path, [](const std::string& w) { std::cerr << "warning: " << w << "\n"; });
    MatrixStore store = build_store(lexicon, embeddings);
    persist_store(store, out_path);
    std::cout << "built " << store.size() << " matrices of dimension "
              << store.dim() << "\n";
    return 0;
}

int cmd_compose(const std::string& store_path, const std::string& type,
                const std::string& rule, const std::string& phrase) {
    MatrixStore store = load_store(store_path);
    PhraseType pt = phrase_type_from_name(type);
    CompositionRule r = rule_from_name(rule);
    std::istringstream ss(phrase);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    PsdMatrix result = compose_phrase(tokens, pt, r, store);
    print_matrix(result.entries());
    Eigen::SelfAdjointEigenSolver<Matrix> es(result.entries(),
                                             Eigen::EigenvaluesOnly);
    std::cout << std::setprecision(6) << "lambda_max "
              << es.eigenvalues().maxCoeff() << "\n"
              << "trace " << result.entries().trace() << "\n";
    return 0;
}

int cmd_score(const std::string& store_path, const std::string& type,
              const std::string& rule, const std::string& measure,
              const std::string& left, const std::string& right) {
    MatrixStore store = load_store(store_path);
    PhraseType pt = phrase_type_from_name(type);
    PhrasePair pair;
    std::istringstream sl(left), sr(right);
    std::string tok;
    while (sl >> tok) pair.left.push_back(tok);
    while (sr >> tok) pair.right.push_back(tok);
    pair.label = true;
    double s = score_pair(pair, pt, rule_from_name(rule),
                          measure_from_name(measure), store);
    std::cout << std::setprecision(6) << s << "\n";
    return 0;
}

int cmd_evaluate(const std::string& config_path, const std::string& out_base) {
    EvalConfig cfg = load_config(config_path);
    if (cfg.store_path.empty()) {
        std::cerr << "error: config has no store_path\n";
        return 2;
    }
    MatrixStore store = load_store(cfg.store_path);
    EvalReport report = run_table(cfg, store);
    std::cout << report.to_text();
    if (!out_base.empty()) {
        std::ofstream txt(out_base + ".txt");
        txt << report.to_text();
        std::ofstream csv(out_base + ".csv");
        csv << report.to_csv();
        if (!txt || !csv) {
            std::cerr << "error: cannot write report files at " << out_base
                      << "\n";
            return 1;
        }
    }
    return 0;
}

int cmd_verify(Eigen::Index m, int trials, std::uint64_t seed,
               const std::string& witness_dir) {
    if (trials < 1) {
        std::cerr << "error: --trials must be >= 1\n";
        return 2;
    }
    if (m < 2) {
        std::cerr << "error: --m must be >= 2\n";
        return 2;
    }
    VerifyReport report = run_verification(m, trials, seed);
    print_report(report, std::cout);
    if (!witness_dir.empty()) {
        int k = 0;
        for (const auto& w : report.witnesses) {
            std::string path = witness_dir + "/" + rule_name(w.rule) + "-" +
                               w.property + "-" + std::to_string(k++) + ".txt";
            save_witness(w, path);
            std::cout << "witness saved: " << path << "\n";
        }
    }
    if (!report.all_passed()) {
        // serialize whatever witnesses exist for the failure report
        for (const auto& r : report.results)
            if (!r.passed)
                std::cerr << "failed: " << r.name << " " << r.detail << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"psd word matrices: composition, hyponymy, evaluation"};
    app.require_subcommand(1);

    std::string embeddings, lexicon, out_store, store_path, type, rule,
        measure, phrase, left, right, config_path, out_base, witness_dir;
    Eigen::Index dim_arg = 0;
    Eigen::Index verify_m = 3;
    int trials = 500;
    std::uint64_t seed = default_seed();

    auto* build = app.add_subcommand("build-matrices",
                                     "build psd word matrices from "
                                     "embeddings and a hyponym lexicon");
    build->add_option("--embeddings", embeddings)->required();
    build->add_option("--lexicon", lexicon)->required();
    build->add_option("--out", out_store)->required();
    build->add_option("--dim", dim_arg, "expected embedding dimension");

    auto* compose_cmd =
        app.add_subcommand("compose", "compose a phrase and print the matrix");
    compose_cmd->add_option("--store", store_path)->required();
    compose_cmd->add_option("--type", type, "sv|vo|svo")->required();
    compose_cmd->add_option("--rule", rule)->required();
    compose_cmd->add_option("tokens", phrase)->required();

    auto* score_cmd =
        app.add_subcommand("score", "graded hyponymy score of a phrase pair");
    score_cmd->add_option("--store", store_path)->required();
    score_cmd->add_option("--type", type)->required();
    score_cmd->add_option("--rule", rule)->required();
    score_cmd->add_option("--measure", measure, "ke|kba|crisp")->required();
    score_cmd->add_option("left", left)->required();
    score_cmd->add_option("right", right)->required();

    auto* eval_cmd = app.add_subcommand(
        "evaluate", "run the AUC/bootstrap table for a config");
    eval_cmd->add_option("--config", config_path)->required();
    eval_cmd->add_option("--out", out_base,
                         "basename for .txt and .csv report files");

    auto* verify_cmd = app.add_subcommand(
        "verify", "run the composition-rule property suite");
    verify_cmd->add_option("--m", verify_m, "max dimension (runs 2..m)");
    verify_cmd->add_option("--trials", trials);
    verify_cmd->add_option("--seed", seed);
    verify_cmd->add_option("--witness-dir", witness_dir,
                           "directory for found counterexamples");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed())
            return cmd_build(embeddings, lexicon, out_store,
                             dim_arg > 0
                                 ? std::optional<Eigen::Index>(dim_arg)
                                 : std::nullopt);
        if (compose_cmd->parsed())
            return cmd_compose(store_path, type, rule, phrase);
        if (score_cmd->parsed())
            return cmd_score(store_path, type, rule, measure, left, right);
        if (eval_cmd->parsed()) return cmd_evaluate(config_path, out_base);
        if (verify_cmd->parsed())
            return cmd_verify(verify_m, trials, seed, witness_dir);
    } catch (const psdcomp::MissingWord& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const psdcomp::UnknownRule& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const psdcomp::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const psdcomp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
