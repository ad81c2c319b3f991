// rational.hpp: exact rational scalars and dense rational matrices.
//
// All structural quantities (stoichiometric rank, Gamma0, Q, conservation
// rows, transform precondition checks) are computed here in exact
// arithmetic; floating-point copies are derived afterwards for numerics.
// Numerators/denominators are kept in __int128, which is far beyond what
// desk-scale networks (tens of reactions, stoichiometries in single
// digits) can produce during elimination.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace crn {

using int128 = __int128;

int128 gcd128(int128 a, int128 b);
std::string to_string(int128 v);

/// Exact rational number, always normalized: den > 0, gcd(|num|, den) = 1.
struct Rat {
    int128 num = 0;
    int128 den = 1;

    Rat() = default;
    Rat(long long n) : num(n), den(1) {}
    Rat(int128 n, int128 d);

    bool is_zero() const { return num == 0; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    Rat operator-() const;
    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const;
    Rat operator*(const Rat& o) const;
    Rat operator/(const Rat& o) const;
    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
};

std::string to_string(const Rat& r);

/// Dense row-major rational matrix.
struct RatMat {
    int rows = 0;
    int cols = 0;
    std::vector<Rat> a;

    RatMat() = default;
    RatMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Rat& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Rat& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static RatMat identity(int n);
    static RatMat from_int(const std::vector<std::vector<long long>>& m);

    RatMat transposed() const;
    bool operator==(const RatMat& o) const;
};

RatMat mat_mul(const RatMat& a, const RatMat& b);

/// In-place reduced row echelon form with leftmost pivots. Returns the rank;
/// pivot_cols (if non-null) receives the pivot column indices in order.
int rref(RatMat& m, std::vector<int>* pivot_cols = nullptr);

int rank_of(RatMat m);

/// Inverse of a square nonsingular matrix; throws std::invalid_argument if singular.
RatMat inverse(const RatMat& m);

/// Column-by-column elimination selecting, for each column, the first still
/// unused row with a nonzero entry. Returns the pivot row indices in column
/// order; size < cols means the matrix has deficient column rank.
std::vector<int> pivot_rows_by_columns(RatMat m);

/// Primitive integer basis of the left null space of an integer matrix:
/// each row c satisfies c*A = 0 exactly, has gcd 1, and first nonzero > 0.
std::vector<std::vector<long long>> integer_left_nullspace(
    const std::vector<std::vector<long long>>& A);

}  // namespace crn
