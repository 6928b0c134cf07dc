#ifndef PSDCOMP_LEXICON_HPP
#define PSDCOMP_LEXICON_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psdcomp/linalg.hpp"

namespace psdcomp {

struct EmbeddingTable {
    Eigen::Index dim = 0;
    std::map<std::string, Vector> vectors;
};

struct HyponymLexicon {
    // word -> ordered hyponym list, duplicates dropped at load time
    std::map<std::string, std::vector<std::string>> entries;
};

class MatrixStore {
  public:
    MatrixStore() = default;
    explicit MatrixStore(Eigen::Index dim) : dim_(dim) {}

    Eigen::Index dim() const { return dim_; }
    std::size_t size() const { return matrices_.size(); }
    bool contains(const std::string& word) const;
    const PsdMatrix& get(const std::string& word) const;  // MissingWord
    void put(const std::string& word, PsdMatrix matrix);
    const std::map<std::string, PsdMatrix>& matrices() const {
        return matrices_;
    }

  private:
    Eigen::Index dim_ = 0;
    std::map<std::string, PsdMatrix> matrices_;
};

using WarningSink = std::function<void(const std::string&)>;

// Whitespace text, one word per line followed by its vector components.
// Dimension is inferred from the first line; ragged or non-numeric lines
// raise FormatError with the offending line number.
EmbeddingTable load_embeddings(const std::string& path);

// TSV lines `word<TAB>comma,separated,hyponyms`. Duplicate hyponyms are
// dropped with a warning.
HyponymLexicon load_lexicon(const std::string& path,
                            const WarningSink& warn = {});

// Gram sum of the word's hyponym vectors, normalized to max eigenvalue 1.
// A word with no hyponym entry (or an empty list) falls back to its own
// rank-1 matrix.
PsdMatrix build_matrix(const std::string& word, const HyponymLexicon& lexicon,
                       const EmbeddingTable& embeddings,
                       const Tolerance& tol = {});

// Builds matrices for every word in the lexicon plus every leaf hyponym.
MatrixStore build_store(const HyponymLexicon& lexicon,
                        const EmbeddingTable& embeddings,
                        const Tolerance& tol = {});

// Versioned text format; round trip is bit-exact on entries.
void persist_store(const MatrixStore& store, const std::string& path);
MatrixStore load_store(const std::string& path,
                       std::optional<Eigen::Index> expect_dim = std::nullopt);

}  // namespace psdcomp

#endif
