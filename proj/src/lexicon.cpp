#include "psdcomp/lexicon.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace psdcomp {

namespace {

constexpr const char* kStoreMagic = "psdcomp-store";
constexpr int kStoreVersion = 1;

double parse_double(const std::string& token, const std::string& path,
                    std::size_t lineno) {
    double value;
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw FormatError(path + ":" + std::to_string(lineno) +
                          ": non-numeric field '" + token + "'");
    return value;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

}  // namespace

bool MatrixStore::contains(const std::string& word) const {
    return matrices_.count(word) > 0;
}

const PsdMatrix& MatrixStore::get(const std::string& word) const {
    auto it = matrices_.find(word);
    if (it == matrices_.end())
        throw MissingWord("word '" + word + "' not in matrix store");
    return it->second;
}

void MatrixStore::put(const std::string& word, PsdMatrix matrix) {
    if (dim_ == 0) dim_ = matrix.dim();
    if (matrix.dim() != dim_)
        throw DimensionError("store dimension is " + std::to_string(dim_) +
                             ", matrix for '" + word + "' has dimension " +
                             std::to_string(matrix.dim()));
    matrices_.insert_or_assign(word, std::move(matrix));
}

EmbeddingTable load_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open embedding file " + path);
    EmbeddingTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (fields.size() < 2)
            throw FormatError(path + ":" + std::to_string(lineno) +
                              ": expected `word v1 ... vm`");
        Eigen::Index m = Eigen::Index(fields.size()) - 1;
        if (table.dim == 0)
            table.dim = m;
        else if (m != table.dim)
            throw FormatError(path + ":" + std::to_string(lineno) + ": " +
                              std::to_string(m) + " values, expected " +
                              std::to_string(table.dim));
        Vector v(m);
        for (Eigen::Index i = 0; i < m; ++i)
            v(i) = parse_double(fields[std::size_t(i) + 1], path, lineno);
        table.vectors[fields[0]] = std::move(v);
    }
    if (table.vectors.empty())
        throw FormatError(path + ": empty embedding file");
    return table;
}

HyponymLexicon load_lexicon(const std::string& path, const WarningSink& warn) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open lexicon file " + path);
    HyponymLexicon lex;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw FormatError(path + ":" + std::to_string(lineno) +
                              ": missing tab separator");
        std::string word = line.substr(0, tab);
        std::string rest = line.substr(tab + 1);
        std::vector<std::string> hyponyms;
        std::set<std::string> seen;
        std::istringstream ss(rest);
        std::string h;
        while (std::getline(ss, h, ',')) {
            if (h.empty()) continue;
            if (!seen.insert(h).second) {
                if (warn)
                    warn(path + ":" + std::to_string(lineno) +
                         ": duplicate hyponym '" + h + "' for '" + word +
                         "' dropped");
                continue;
            }
            hyponyms.push_back(h);
        }
        lex.entries[word] = std::move(hyponyms);
    }
    return lex;
}

PsdMatrix build_matrix(const std::string& word, const HyponymLexicon& lexicon,
                       const EmbeddingTable& embeddings,
                       const Tolerance& tol) {
    const Eigen::Index m = embeddings.dim;
    std::vector<const Vector*> vecs;
    auto entry = lexicon.entries.find(word);
    if (entry != lexicon.entries.end() && !entry->second.empty()) {
        for (const auto& h : entry->second) {
            auto it = embeddings.vectors.find(h);
            if (it != embeddings.vectors.end()) vecs.push_back(&it->second);
        }
    }
    if (vecs.empty()) {
        // leaf word: its own rank-1 matrix
        auto it = embeddings.vectors.find(word);
        if (it == embeddings.vectors.end())
            throw MissingVector("no embedding for '" + word +
                                "' or any of its hyponyms");
        vecs.push_back(&it->second);
    }
    Matrix gram = Matrix::Zero(m, m);
    for (const Vector* v : vecs) gram += (*v) * v->transpose();
    return normalize_max_eig(PsdMatrix::trusted(gram), tol);
}

MatrixStore build_store(const HyponymLexicon& lexicon,
                        const EmbeddingTable& embeddings,
                        const Tolerance& tol) {
    std::set<std::string> words;
    for (const auto& [word, hyponyms] : lexicon.entries) {
        words.insert(word);
        for (const auto& h : hyponyms) words.insert(h);
    }
    MatrixStore store(embeddings.dim);
    for (const auto& word : words)
        store.put(word, build_matrix(word, lexicon, embeddings, tol));
    return store;
}

void persist_store(const MatrixStore& store, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    out << kStoreMagic << " " << kStoreVersion << " " << store.dim() << " "
        << store.size() << "\n";
    out << std::setprecision(17);
    for (const auto& [word, matrix] : store.matrices()) {
        out << word << " " << matrix.dim() << "\n";
        const Matrix& e = matrix.entries();
        for (Eigen::Index i = 0; i < e.rows(); ++i) {
            for (Eigen::Index j = 0; j < e.cols(); ++j) {
                if (j) out << " ";
                out << e(i, j);
            }
            out << "\n";
        }
    }
    if (!out) throw FormatError("write to " + path + " failed");
}

MatrixStore load_store(const std::string& path,
                       std::optional<Eigen::Index> expect_dim) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open store file " + path);
    std::string magic;
    int version = 0;
    Eigen::Index dim = 0;
    std::size_t count = 0;
    in >> magic >> version >> dim >> count;
    if (!in || magic != kStoreMagic)
        throw FormatError(path + ": not a matrix store file");
    if (version != kStoreVersion)
        throw FormatError(path + ": unsupported store version " +
                          std::to_string(version));
    if (expect_dim && dim != *expect_dim)
        throw FormatError(path + ": store dimension " + std::to_string(dim) +
                          " does not match expected " +
                          std::to_string(*expect_dim));
    MatrixStore store(dim);
    for (std::size_t k = 0; k < count; ++k) {
        std::string word;
        Eigen::Index m = 0;
        in >> word >> m;
        if (!in || m != dim)
            throw FormatError(path + ": truncated or malformed entry " +
                              std::to_string(k));
        Matrix e(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j)
                if (!(in >> e(i, j)))
                    throw FormatError(path + ": truncated matrix for '" +
                                      word + "'");
        store.put(word, PsdMatrix::trusted(e));
    }
    return store;
}

}  // namespace psdcomp
