#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "permreg/errors.hpp"
#include "permreg/permutation.hpp"

using namespace permreg;

TEST_CASE("identity and explicit construction") {
    SparsePermutation id(3);
    CHECK(id.is_identity());
    CHECK(id.hamming() == 0);
    CHECK(id.support().empty());

    SparsePermutation swap01({1, 0, 2});
    CHECK(swap01.hamming() == 2);
    CHECK(swap01.support() == std::vector<int>{0, 1});
    CHECK(swap01.inverse() == swap01);

    CHECK_THROWS_AS(SparsePermutation({0, 0, 1}), DimensionError);
    CHECK_THROWS_AS(SparsePermutation({0, 3, 1}), DimensionError);
}

TEST_CASE("apply moves entries by map") {
    Eigen::VectorXd v(3);
    v << 1, 2, 3;
    CHECK(SparsePermutation(3).apply(v) == v);

    SparsePermutation swap01({1, 0, 2});
    Eigen::VectorXd w = swap01.apply(v);
    CHECK(w[0] == 2);
    CHECK(w[1] == 1);
    CHECK(w[2] == 3);

    Eigen::VectorXd bad(2);
    CHECK_THROWS_AS(swap01.apply(bad), DimensionError);
}

TEST_CASE("sampling: exact mismatch count, bijectivity, inverse round-trip") {
    RngStream rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_below(40));
        int k = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n) + 1));
        if (k == 1) k = 2;
        const auto pi = sample_sparse_permutation(n, k, derive_seed(7, static_cast<std::uint64_t>(trial)));
        CHECK(pi.hamming() == k);

        const auto inv = pi.inverse();
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = i * 1.25 - 3.0;
        CHECK(inv.apply(pi.apply(v)) == v);

        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        for (int i = 0; i < n; ++i) seen[static_cast<std::size_t>(pi(i))] = 1;
        for (char c : seen) CHECK(c == 1);
    }
}

TEST_CASE("sampling edge cases") {
    CHECK(sample_sparse_permutation(5, 0, 3).is_identity());

    const auto pi = sample_sparse_permutation(5, 2, 3);
    CHECK(pi.hamming() == 2);
    const auto s = pi.support();
    CHECK(pi(s[0]) == s[1]);  // only derangement of a 2-set is the swap
    CHECK(pi(s[1]) == s[0]);

    CHECK_THROWS_AS(sample_sparse_permutation(5, 1, 0), InfeasibleSparsityError);
    CHECK_THROWS_AS(sample_sparse_permutation(5, 6, 0), RangeError);
}

TEST_CASE("n=4, k=3 draws are uniform over the 8 possible 3-cycles") {
    // 4 supports x 2 derangements (two 3-cycles) = 8 outcomes.
    std::map<std::vector<int>, int> counts;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t) {
        const auto pi = sample_sparse_permutation(4, 3, derive_seed(9, static_cast<std::uint64_t>(t)));
        CHECK(pi.hamming() == 3);
        ++counts[pi.map()];
    }
    CHECK(counts.size() == 8);
    for (const auto& [map, count] : counts) {
        CHECK(count > 1050);  // expectation 1250, ~5.5 sigma band
        CHECK(count < 1450);
    }
}

TEST_CASE("hamming_distance counts disagreements") {
    SparsePermutation a({1, 0, 2});
    SparsePermutation b(3);
    CHECK(hamming_distance(a, b) == 2);
    CHECK(hamming_distance(a, a) == 0);
    CHECK_THROWS_AS(hamming_distance(a, SparsePermutation(4)), DimensionError);
}
