#include "permreg/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "permreg/errors.hpp"

namespace permreg {

SparsePermutation::SparsePermutation(int n) {
    if (n < 0) throw DimensionError("permutation size must be nonnegative, got " + std::to_string(n));
    map_.resize(static_cast<std::size_t>(n));
    std::iota(map_.begin(), map_.end(), 0);
}

SparsePermutation::SparsePermutation(std::vector<int> map) : map_(std::move(map)) {
    const int n = static_cast<int>(map_.size());
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : map_) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
            throw DimensionError("permutation map is not a bijection on [" + std::to_string(n) + "]");
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

std::vector<int> SparsePermutation::support() const {
    std::vector<int> s;
    for (int i = 0; i < size(); ++i)
        if (map_[static_cast<std::size_t>(i)] != i) s.push_back(i);
    return s;
}

int SparsePermutation::hamming() const {
    int h = 0;
    for (int i = 0; i < size(); ++i)
        if (map_[static_cast<std::size_t>(i)] != i) ++h;
    return h;
}

SparsePermutation SparsePermutation::inverse() const {
    std::vector<int> inv(map_.size());
    for (int i = 0; i < size(); ++i) inv[static_cast<std::size_t>(map_[static_cast<std::size_t>(i)])] = i;
    return SparsePermutation(std::move(inv));
}

Eigen::VectorXd SparsePermutation::apply(const Eigen::VectorXd& v) const {
    if (v.size() != size())
        throw DimensionError("apply: vector length " + std::to_string(v.size()) +
                             " != permutation size " + std::to_string(size()));
    Eigen::VectorXd out(v.size());
    for (int i = 0; i < size(); ++i) out[i] = v[map_[static_cast<std::size_t>(i)]];
    return out;
}

Eigen::MatrixXd SparsePermutation::apply_rows(const Eigen::MatrixXd& m) const {
    if (m.rows() != size())
        throw DimensionError("apply_rows: row count " + std::to_string(m.rows()) +
                             " != permutation size " + std::to_string(size()));
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (int i = 0; i < size(); ++i) out.row(i) = m.row(map_[static_cast<std::size_t>(i)]);
    return out;
}

SparsePermutation sample_sparse_permutation(int n, int k, std::uint64_t seed) {
    RngStream rng(seed);
    return sample_sparse_permutation(n, k, rng);
}

namespace {

// Fisher-Yates over an index vector.
void shuffle_in_place(std::vector<int>& v, RngStream& rng) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
    }
}

}  // namespace

SparsePermutation sample_sparse_permutation(int n, int k, RngStream& rng) {
    if (n < 0) throw DimensionError("n must be nonnegative");
    if (k < 0 || k > n) throw RangeError("k = " + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
    if (k == 1) throw InfeasibleSparsityError("a bijection cannot move exactly one index (k = 1)");

    SparsePermutation identity(n);
    if (k == 0) return identity;

    // Uniform k-subset via a partial Fisher-Yates.
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        const int j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    std::vector<int> support(pool.begin(), pool.begin() + k);
    std::sort(support.begin(), support.end());

    // Uniform derangement of the support by rejection.
    std::vector<int> image = support;
    bool deranged = false;
    while (!deranged) {
        shuffle_in_place(image, rng);
        deranged = true;
        for (int i = 0; i < k; ++i) {
            if (image[static_cast<std::size_t>(i)] == support[static_cast<std::size_t>(i)]) {
                deranged = false;
                break;
            }
        }
    }

    std::vector<int> map(identity.map());
    for (int i = 0; i < k; ++i) map[static_cast<std::size_t>(support[static_cast<std::size_t>(i)])] = image[static_cast<std::size_t>(i)];
    return SparsePermutation(std::move(map));
}

int hamming_distance(const SparsePermutation& a, const SparsePermutation& b) {
    if (a.size() != b.size()) throw DimensionError("hamming_distance: size mismatch");
    int h = 0;
    for (int i = 0; i < a.size(); ++i)
        if (a(i) != b(i)) ++h;
    return h;
}

}  // namespace permreg
