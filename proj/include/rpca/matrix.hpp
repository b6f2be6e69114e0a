#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rpca {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

// Set of (i, j) index pairs into an n1 x n2 matrix. Stored as a sorted
// (row-major) list for iteration plus a dense boolean view for O(1)
// membership tests.
class IndexMask {
  public:
    IndexMask() : rows_(0), cols_(0) {}
    IndexMask(Index rows, Index cols)
        : rows_(rows), cols_(cols), dense_(rows * cols, 0) {
        if (rows < 0 || cols < 0)
            throw std::invalid_argument("IndexMask: negative dimensions");
    }

    // Builds from an unsorted pair list; rejects out-of-range and duplicates.
    static IndexMask from_pairs(Index rows, Index cols,
                                std::vector<std::pair<Index, Index>> pairs);

    // All indices of a rows x cols matrix.
    static IndexMask full(Index rows, Index cols);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index size() const { return static_cast<Index>(list_.size()); }
    bool empty() const { return list_.empty(); }

    bool contains(Index i, Index j) const {
        return dense_[static_cast<size_t>(i) * cols_ + j] != 0;
    }

    // Row-major sorted (i, j) list.
    const std::vector<std::pair<Index, Index>>& entries() const { return list_; }

    // Appends an entry; caller must keep insertion row-major sorted and
    // duplicate-free (generators do).
    void push(Index i, Index j) {
        dense_[static_cast<size_t>(i) * cols_ + j] = 1;
        list_.emplace_back(i, j);
    }

    bool is_subset_of(const IndexMask& other) const;

    bool operator==(const IndexMask& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && list_ == o.list_;
    }

  private:
    Index rows_, cols_;
    std::vector<std::pair<Index, Index>> list_;
    std::vector<uint8_t> dense_;
};

// Plain-text interchange: "rows cols" header, one row per line.
void save_matrix(const std::string& path, const Mat& A);
Mat load_matrix(const std::string& path);

// Masks: "rows cols k" header, then k lines "i j".
void save_mask(const std::string& path, const IndexMask& m);
IndexMask load_mask(const std::string& path);

}  // namespace rpca
