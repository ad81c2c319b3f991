#include "crn/rational.hpp"

namespace crn {

int128 gcd128(int128 a, int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::string to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    // -2^127 does not occur for desk-scale data; negate safely.
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                              : static_cast<unsigned __int128>(v);
    std::string s;
    while (u != 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return {s.rbegin(), s.rend()};
}

Rat::Rat(int128 n, int128 d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rat: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rat Rat::operator-() const { return Rat(-num, den); }

Rat Rat::operator+(const Rat& o) const { return Rat(num * o.den + o.num * den, den * o.den); }

Rat Rat::operator-(const Rat& o) const { return Rat(num * o.den - o.num * den, den * o.den); }

Rat Rat::operator*(const Rat& o) const { return Rat(num * o.num, den * o.den); }

Rat Rat::operator/(const Rat& o) const {
    if (o.num == 0) throw std::invalid_argument("Rat: division by zero");
    return Rat(num * o.den, den * o.num);
}

std::string to_string(const Rat& r) {
    if (r.den == 1) return to_string(r.num);
    return to_string(r.num) + "/" + to_string(r.den);
}

RatMat RatMat::identity(int n) {
    RatMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Rat(1);
    return m;
}

RatMat RatMat::from_int(const std::vector<std::vector<long long>>& v) {
    int r = static_cast<int>(v.size());
    int c = r == 0 ? 0 : static_cast<int>(v[0].size());
    RatMat m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(v[i].size()) != c)
            throw std::invalid_argument("RatMat::from_int: ragged rows");
        for (int j = 0; j < c; ++j) m.at(i, j) = Rat(v[i][j]);
    }
    return m;
}

RatMat RatMat::transposed() const {
    RatMat t(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
}

bool RatMat::operator==(const RatMat& o) const {
    if (rows != o.rows || cols != o.cols) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != o.a[i]) return false;
    return true;
}

RatMat mat_mul(const RatMat& a, const RatMat& b) {
    if (a.cols != b.rows) throw std::invalid_argument("mat_mul: shape mismatch");
    RatMat c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            if (a.at(i, k).is_zero()) continue;
            for (int j = 0; j < b.cols; ++j)
                c.at(i, j) = c.at(i, j) + a.at(i, k) * b.at(k, j);
        }
    return c;
}

int rref(RatMat& m, std::vector<int>* pivot_cols) {
    if (pivot_cols) pivot_cols->clear();
    int pr = 0;
    for (int pc = 0; pc < m.cols && pr < m.rows; ++pc) {
        int sel = -1;
        for (int i = pr; i < m.rows; ++i)
            if (!m.at(i, pc).is_zero()) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != pr)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(pr, j));
        Rat inv = Rat(1) / m.at(pr, pc);
        for (int j = pc; j < m.cols; ++j) m.at(pr, j) = m.at(pr, j) * inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == pr || m.at(i, pc).is_zero()) continue;
            Rat f = m.at(i, pc);
            for (int j = pc; j < m.cols; ++j) m.at(i, j) = m.at(i, j) - f * m.at(pr, j);
        }
        if (pivot_cols) pivot_cols->push_back(pc);
        ++pr;
    }
    return pr;
}

int rank_of(RatMat m) { return rref(m); }

RatMat inverse(const RatMat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("inverse: not square");
    int n = m.rows;
    RatMat aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = Rat(1);
    }
    std::vector<int> piv;
    rref(aug, &piv);
    // all pivots must fall in the left block, else m was singular
    for (int i = 0; i < n; ++i)
        if (static_cast<int>(piv.size()) <= i || piv[static_cast<size_t>(i)] != i)
            throw std::invalid_argument("inverse: singular matrix");
    RatMat inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
    return inv;
}

std::vector<int> pivot_rows_by_columns(RatMat m) {
    std::vector<int> pivots;
    std::vector<bool> used(m.rows, false);
    for (int c = 0; c < m.cols; ++c) {
        int sel = -1;
        for (int i = 0; i < m.rows; ++i)
            if (!used[i] && !m.at(i, c).is_zero()) {
                sel = i;
                break;
            }
        if (sel < 0) return pivots;  // deficient; caller decides
        used[sel] = true;
        pivots.push_back(sel);
        Rat inv = Rat(1) / m.at(sel, c);
        for (int j = 0; j < m.cols; ++j) m.at(sel, j) = m.at(sel, j) * inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == sel || m.at(i, c).is_zero()) continue;
            Rat f = m.at(i, c);
            for (int j = 0; j < m.cols; ++j) m.at(i, j) = m.at(i, j) - f * m.at(sel, j);
        }
    }
    return pivots;
}

std::vector<std::vector<long long>> integer_left_nullspace(
    const std::vector<std::vector<long long>>& A) {
    // Null space of A^t, made primitive integer.
    RatMat t = RatMat::from_int(A).transposed();
    std::vector<int> piv;
    int r = rref(t, &piv);
    int n = t.cols;
    std::vector<bool> is_pivot(n, false);
    for (int c : piv) is_pivot[c] = true;

    std::vector<std::vector<long long>> basis;
    for (int f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rat> v(n);
        v[f] = Rat(1);
        for (int i = 0; i < r; ++i) v[piv[i]] = -t.at(i, f);
        // Clear denominators, divide by gcd, sign-normalize.
        int128 l = 1;
        for (const Rat& x : v) l = l / gcd128(l, x.den) * x.den;
        std::vector<long long> iv(n);
        int128 g = 0;
        for (int j = 0; j < n; ++j) {
            int128 val = v[j].num * (l / v[j].den);
            iv[j] = static_cast<long long>(val);
            g = gcd128(g, val);
        }
        if (g > 1)
            for (auto& x : iv) x = static_cast<long long>(x / static_cast<long long>(g));
        for (auto& x : iv) {
            if (x == 0) continue;
            if (x < 0)
                for (auto& y : iv) y = -y;
            break;
        }
        basis.push_back(std::move(iv));
    }
    return basis;
}

}  // namespace crn
