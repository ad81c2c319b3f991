#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crn/rational.hpp"
#include "testutil.hpp"

using namespace crn;

TEST_CASE("rational normalization and arithmetic") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(-2, -4) == Rat(1, 2));
    CHECK(Rat(2, -4) == Rat(-1, 2));
    CHECK((Rat(1, 3) + Rat(1, 6)) == Rat(1, 2));
    CHECK((Rat(1, 3) - Rat(1, 3)).is_zero());
    CHECK((Rat(3, 7) * Rat(7, 3)) == Rat(1));
    CHECK((Rat(5) / Rat(10)) == Rat(1, 2));
    CHECK(to_string(Rat(-7, 2)) == "-7/2");
    CHECK_THROWS_AS(Rat(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(Rat(1) / Rat(0), std::invalid_argument);
}

TEST_CASE("int128 printing") {
    int128 v = 1;
    for (int i = 0; i < 20; ++i) v *= 10;
    CHECK(to_string(v) == "100000000000000000000");
    CHECK(to_string(-v) == "-100000000000000000000");
    CHECK(to_string(int128(0)) == "0");
}

TEST_CASE("rref, rank and inverse on a known matrix") {
    RatMat m = RatMat::from_int({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
    std::vector<int> piv;
    RatMat r = m;
    CHECK(rref(r, &piv) == 2);
    CHECK(piv == std::vector<int>{0, 1});

    RatMat a = RatMat::from_int({{2, 1}, {1, 1}});
    RatMat inv = inverse(a);
    CHECK(mat_mul(a, inv) == RatMat::identity(2));
    CHECK_THROWS_AS(inverse(RatMat::from_int({{1, 2}, {2, 4}})), std::invalid_argument);
}

TEST_CASE("pivot rows by columns") {
    // Column-by-column leftmost pivots: first column pivots in row 1 (row 0
    // is zero there), second column in row 0 after elimination.
    RatMat b = RatMat::from_int({{0, 1}, {2, 1}, {4, 2}});
    auto piv = pivot_rows_by_columns(b);
    REQUIRE(piv.size() == 2);
    CHECK(piv[0] == 1);
    CHECK(piv[1] == 0);

    RatMat deficient = RatMat::from_int({{1, 2}, {2, 4}});
    CHECK(pivot_rows_by_columns(deficient).size() == 1);
}

TEST_CASE("integer left null space is exact and primitive") {
    // Gamma of X+2Y -> 3Y, Y -> X has conservation row (1, 1).
    auto basis = integer_left_nullspace({{-1, 1}, {1, -1}});
    REQUIRE(basis.size() == 1);
    CHECK(basis[0] == std::vector<long long>{1, 1});

    // A full-rank square matrix has an empty left null space.
    CHECK(integer_left_nullspace({{1, 0}, {0, 1}}).empty());
}

TEST_CASE("fuzz: rank agrees with the fraction-free Bareiss oracle") {
    testutil::Rng rng(20260801);
    std::uniform_int_distribution<int> dim(1, 8);
    std::uniform_int_distribution<long long> entry(-4, 4);
    for (int iter = 0; iter < 300; ++iter) {
        int r = dim(rng), c = dim(rng);
        std::vector<std::vector<long long>> m(r, std::vector<long long>(c));
        for (auto& row : m)
            for (auto& v : row) v = entry(rng);
        CHECK(rank_of(RatMat::from_int(m)) == testutil::bareiss_rank(m));
    }
}

TEST_CASE("fuzz: left null space rows annihilate the matrix exactly") {
    testutil::Rng rng(77);
    std::uniform_int_distribution<int> dim(1, 7);
    std::uniform_int_distribution<long long> entry(-3, 3);
    for (int iter = 0; iter < 200; ++iter) {
        int r = dim(rng), c = dim(rng);
        std::vector<std::vector<long long>> m(r, std::vector<long long>(c));
        for (auto& row : m)
            for (auto& v : row) v = entry(rng);
        auto basis = integer_left_nullspace(m);
        CHECK(static_cast<int>(basis.size()) == r - testutil::bareiss_rank(m));
        for (const auto& row : basis) {
            for (int j = 0; j < c; ++j) {
                long long dot = 0;
                for (int i = 0; i < r; ++i) dot += row[i] * m[i][j];
                CHECK(dot == 0);
            }
        }
    }
}
