#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "permreg/rng.hpp"

namespace permreg {

/// A permutation phi on {0, ..., n-1} stored as map[i] = phi(i), carried with
/// its set of non-fixed points. Acting on a vector v produces w with
/// w[i] = v[phi(i)], i.e. the matrix Pi with Pi(i, phi(i)) = 1.
class SparsePermutation {
  public:
    SparsePermutation() = default;  // empty permutation

    // Identity on [n].
    explicit SparsePermutation(int n);

    // From an explicit map; validates bijectivity.
    explicit SparsePermutation(std::vector<int> map);

    int size() const { return static_cast<int>(map_.size()); }
    int operator()(int i) const { return map_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& map() const { return map_; }

    /// Non-fixed points {i : phi(i) != i}, ascending.
    std::vector<int> support() const;

    /// Hamming distance to the identity, |support()|.
    int hamming() const;

    SparsePermutation inverse() const;

    bool is_identity() const { return hamming() == 0; }

    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

    /// Row-permuted copy of a matrix: result.row(i) = m.row(phi(i)).
    Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& m) const;

    friend bool operator==(const SparsePermutation& a, const SparsePermutation& b) {
        return a.map_ == b.map_;
    }
    friend bool operator!=(const SparsePermutation& a, const SparsePermutation& b) {
        return !(a == b);
    }

  private:
    std::vector<int> map_;
};

/// Draws a permutation with exactly k non-fixed points: the support is a
/// uniform k-subset of [n] and the action on it a uniform derangement
/// (rejection-sampled). k = 1 is infeasible for a bijection.
SparsePermutation sample_sparse_permutation(int n, int k, std::uint64_t seed);

/// Same draw from an already-positioned stream.
SparsePermutation sample_sparse_permutation(int n, int k, RngStream& rng);

/// Hamming distance between two permutations of equal size.
int hamming_distance(const SparsePermutation& a, const SparsePermutation& b);

}  // namespace permreg
