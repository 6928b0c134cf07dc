// Synthetic crisp-by-construction entailment data for eval tests.
#ifndef PSDCOMP_TESTS_SYNTHETIC_HPP
#define PSDCOMP_TESTS_SYNTHETIC_HPP

#include <fstream>
#include <random>
#include <string>

#include "psdcomp/compose.hpp"
#include "psdcomp/eval.hpp"

namespace synthetic {

using namespace psdcomp;

// Each positive pair entails crisply before any normalization: hypernym
// matrices are hyponym matrices plus a random psd part. The negative pair
// is the same phrase pair reversed. In every second pair the verb (and for
// SVO the object) is shared between the two sides, so a verb-only reading
// carries no signal there.
inline void make_dataset(PhraseType type, int n_pairs, Eigen::Index m,
                         std::uint64_t seed, MatrixStore& store,
                         EntailmentDataset& ds) {
    std::mt19937_64 rng(seed);
    ds.phrase_type = type;
    ds.name = "synthetic-" + phrase_type_name(type);
    auto fresh = [&](const std::string& base, int k) {
        PsdMatrix hypo = random_psd(m, rng);
        PsdMatrix hyper = hypo + random_psd(m, rng);
        std::string lo = base + std::to_string(k) + "a";
        std::string hi = base + std::to_string(k) + "b";
        store.put(lo, hypo);
        store.put(hi, hyper);
        return std::pair{lo, hi};
    };
    auto shared = [&](const std::string& base, int k) {
        std::string w = base + std::to_string(k) + "s";
        store.put(w, random_psd(m, rng));
        return std::pair{w, w};
    };
    for (int k = 0; k < n_pairs; ++k) {
        bool share_verb = k % 2 == 1;
        PhrasePair pos;
        switch (type) {
            case PhraseType::SV: {
                auto [slo, shi] = fresh("n", k);
                auto [vlo, vhi] = share_verb ? shared("v", k) : fresh("v", k);
                pos.left = {slo, vlo};
                pos.right = {shi, vhi};
                break;
            }
            case PhraseType::VO: {
                auto [vlo, vhi] = share_verb ? shared("v", k) : fresh("v", k);
                auto [olo, ohi] = fresh("o", k);
                pos.left = {vlo, olo};
                pos.right = {vhi, ohi};
                break;
            }
            default: {
                auto [slo, shi] = fresh("n", k);
                auto [vlo, vhi] = share_verb ? shared("v", k) : fresh("v", k);
                auto [olo, ohi] = share_verb ? shared("o", k) : fresh("o", k);
                pos.left = {slo, vlo, olo};
                pos.right = {shi, vhi, ohi};
                break;
            }
        }
        pos.label = true;
        PhrasePair neg{pos.right, pos.left, false};
        ds.pairs.push_back(pos);
        ds.pairs.push_back(neg);
    }
}

inline std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += " ";
        out += t;
    }
    return out;
}

inline void write_dataset_tsv(const EntailmentDataset& ds,
                              const std::string& path) {
    std::ofstream out(path);
    for (const auto& p : ds.pairs)
        out << join(p.left) << "\t" << join(p.right) << "\t"
            << (p.label ? "true" : "false") << "\n";
}

}  // namespace synthetic

#endif
