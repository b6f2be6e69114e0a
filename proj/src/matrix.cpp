#include "rpca/matrix.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rpca {

IndexMask IndexMask::from_pairs(Index rows, Index cols,
                                std::vector<std::pair<Index, Index>> pairs) {
    IndexMask m(rows, cols);
    std::sort(pairs.begin(), pairs.end());
    for (size_t k = 0; k < pairs.size(); ++k) {
        auto [i, j] = pairs[k];
        if (i < 0 || i >= rows || j < 0 || j >= cols)
            throw std::invalid_argument("IndexMask: index out of range");
        if (k > 0 && pairs[k] == pairs[k - 1])
            throw std::invalid_argument("IndexMask: duplicate index");
        m.push(i, j);
    }
    return m;
}

IndexMask IndexMask::full(Index rows, Index cols) {
    IndexMask m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m.push(i, j);
    return m;
}

bool IndexMask::is_subset_of(const IndexMask& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    for (const auto& [i, j] : list_)
        if (!other.contains(i, j)) return false;
    return true;
}

void save_matrix(const std::string& path, const Mat& A) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << A.rows() << " " << A.cols() << "\n";
    char buf[32];
    for (Index i = 0; i < A.rows(); ++i) {
        for (Index j = 0; j < A.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", A(i, j));
            out << buf << (j + 1 < A.cols() ? " " : "");
        }
        out << "\n";
    }
}

Mat load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Index rows, cols;
    if (!(in >> rows >> cols) || rows < 0 || cols < 0)
        throw std::runtime_error("bad matrix header in " + path);
    Mat A(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            if (!(in >> A(i, j)))
                throw std::runtime_error("truncated matrix in " + path);
    return A;
}

void save_mask(const std::string& path, const IndexMask& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << m.rows() << " " << m.cols() << " " << m.size() << "\n";
    for (const auto& [i, j] : m.entries()) out << i << " " << j << "\n";
}

IndexMask load_mask(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Index rows, cols, k;
    if (!(in >> rows >> cols >> k))
        throw std::runtime_error("bad mask header in " + path);
    std::vector<std::pair<Index, Index>> pairs;
    pairs.reserve(k);
    for (Index t = 0; t < k; ++t) {
        Index i, j;
        if (!(in >> i >> j)) throw std::runtime_error("truncated mask in " + path);
        pairs.emplace_back(i, j);
    }
    return IndexMask::from_pairs(rows, cols, std::move(pairs));
}

}  // namespace rpca
