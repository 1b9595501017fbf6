#pragma once

#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "pnphi/bigint.hpp"
#include "pnphi/errors.hpp"

namespace pnphi {

template <typename Int>
using Vec = std::vector<Int>;

// Square integer matrix with exact arithmetic. The canonical instantiation
// IntMatrixZ uses arbitrary-precision entries; engines instantiate with
// std::int64_t after proving a bound.
template <typename Int>
class IntMatrix {
 public:
  explicit IntMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {}

  IntMatrix(std::initializer_list<std::initializer_list<Int>> rows)
      : n_(static_cast<int>(rows.size())) {
    a_.reserve(static_cast<std::size_t>(n_) * n_);
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != n_) {
        throw ParseError("matrix rows must all have the same length");
      }
      for (const auto& x : row) a_.push_back(x);
    }
  }

  static IntMatrix identity(int n) {
    IntMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  int n() const noexcept { return n_; }

  Int& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const Int& at(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * n_ + j];
  }

  bool operator==(const IntMatrix& o) const { return n_ == o.n_ && a_ == o.a_; }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

  IntMatrix operator*(const IntMatrix& o) const {
    IntMatrix r(n_);
    for (int i = 0; i < n_; ++i) {
      for (int k = 0; k < n_; ++k) {
        const Int& aik = at(i, k);
        if (aik == 0) continue;
        for (int j = 0; j < n_; ++j) r.at(i, j) += aik * o.at(k, j);
      }
    }
    return r;
  }

  Vec<Int> apply(const Vec<Int>& v) const {
    Vec<Int> r(n_);
    for (int i = 0; i < n_; ++i) {
      Int s = 0;
      for (int j = 0; j < n_; ++j) s += at(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }

  Int trace() const {
    Int s = 0;
    for (int i = 0; i < n_; ++i) s += at(i, i);
    return s;
  }

  // Exact determinant by cofactor expansion; dimensions here are small.
  Int determinant() const {
    if (n_ == 1) return at(0, 0);
    if (n_ == 2) return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    Int det = 0;
    for (int j = 0; j < n_; ++j) {
      if (at(0, j) == 0) continue;
      Int cof = minor_matrix(0, j).determinant();
      if (j % 2 == 1) cof = -cof;
      det += at(0, j) * cof;
    }
    return det;
  }

  bool is_unimodular() const {
    Int d = determinant();
    return d == 1 || d == -1;
  }

  // Transpose of the cofactor matrix; M * adjugate(M) = det(M) * I exactly.
  IntMatrix adjugate() const {
    IntMatrix adj(n_);
    if (n_ == 1) {
      adj.at(0, 0) = 1;
      return adj;
    }
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        Int cof = minor_matrix(i, j).determinant();
        if ((i + j) % 2 == 1) cof = -cof;
        adj.at(j, i) = cof;
      }
    }
    return adj;
  }

  // Exact inverse for |det| = 1: adjugate times det.
  IntMatrix inverse_unimodular() const {
    Int d = determinant();
    if (d != 1 && d != -1) {
      throw NonUnimodularError("matrix inverse over Z requires |det| = 1, got det = " +
                               to_string_generic(d));
    }
    IntMatrix inv = adjugate();
    if (d == -1) {
      for (auto& x : inv.a_) x = -x;
    }
    return inv;
  }

  std::string to_literal() const {
    std::ostringstream os;
    for (int i = 0; i < n_; ++i) {
      if (i) os << ';';
      for (int j = 0; j < n_; ++j) {
        if (j) os << ',';
        os << at(i, j);
      }
    }
    return os.str();
  }

 private:
  IntMatrix minor_matrix(int row, int col) const {
    IntMatrix m(n_ - 1);
    int mi = 0;
    for (int i = 0; i < n_; ++i) {
      if (i == row) continue;
      int mj = 0;
      for (int j = 0; j < n_; ++j) {
        if (j == col) continue;
        m.at(mi, mj) = at(i, j);
        ++mj;
      }
      ++mi;
    }
    return m;
  }

  template <typename T>
  static std::string to_string_generic(const T& x) {
    std::ostringstream os;
    os << x;
    return os.str();
  }

  int n_;
  std::vector<Int> a_;
};

using IntMatrixZ = IntMatrix<BigInt>;

// M^k by binary powering; negative k requires |det| = 1 and inverts first.
template <typename Int>
IntMatrix<Int> mat_pow(const IntMatrix<Int>& m, std::int64_t k) {
  IntMatrix<Int> base = m;
  if (k < 0) {
    base = m.inverse_unimodular();
    k = -k;
  }
  IntMatrix<Int> result = IntMatrix<Int>::identity(m.n());
  while (k > 0) {
    if (k & 1) result = result * base;
    base = base * base;
    k >>= 1;
  }
  return result;
}

// --- small exact vector helpers ---

template <typename Int>
Vec<Int> vec_add(const Vec<Int>& a, const Vec<Int>& b) {
  Vec<Int> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

template <typename Int>
Vec<Int> vec_sub(const Vec<Int>& a, const Vec<Int>& b) {
  Vec<Int> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

template <typename Int>
Vec<Int> vec_neg(const Vec<Int>& a) {
  Vec<Int> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

template <typename Int>
bool vec_is_zero(const Vec<Int>& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

template <typename Int>
Int vec_linf(const Vec<Int>& a) {
  Int m = 0;
  for (const auto& x : a) {
    Int ax = int_abs(x);
    if (ax > m) m = ax;
  }
  return m;
}

template <typename Int>
Int vec_l1(const Vec<Int>& a) {
  Int s = 0;
  for (const auto& x : a) s += int_abs(x);
  return s;
}

template <typename Int>
Int vec_l2sq(const Vec<Int>& a) {
  Int s = 0;
  for (const auto& x : a) s += x * x;
  return s;
}

inline BigInt parse_bigint(std::string tok) {
  const auto begin = tok.find_first_not_of(" \t");
  const auto end = tok.find_last_not_of(" \t");
  if (begin == std::string::npos) throw ParseError("empty integer literal");
  tok = tok.substr(begin, end - begin + 1);
  std::size_t i = (tok[0] == '-' || tok[0] == '+') ? 1 : 0;
  if (i == tok.size()) throw ParseError("bad integer literal '" + tok + "'");
  for (; i < tok.size(); ++i) {
    if (tok[i] < '0' || tok[i] > '9') {
      throw ParseError("bad integer literal '" + tok + "'");
    }
  }
  return BigInt(tok);
}

// Matrix literal: rows separated by ';', entries by ',', e.g. "2,1;1,1".
inline IntMatrixZ parse_matrix(const std::string& text) {
  std::vector<std::vector<BigInt>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    std::vector<BigInt> entries;
    std::stringstream rs(row);
    std::string tok;
    while (std::getline(rs, tok, ',')) {
      entries.push_back(parse_bigint(tok));
    }
    if (entries.empty()) throw ParseError("empty matrix row in \"" + text + "\"");
    rows.push_back(std::move(entries));
  }
  if (rows.empty()) throw ParseError("empty matrix literal");
  const int n = static_cast<int>(rows.size());
  IntMatrixZ m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw ParseError("matrix literal is not square: \"" + text + "\"");
    }
    for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace pnphi
