#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "pnphi/matrix.hpp"
#include "pnphi/spectral.hpp"

namespace pnphi {

// Normal form a * t^k with a in Z^n and k the t-exponent. The "left"
// convention g = a * t^k is fixed here once: the vector part is read
// before the stable letter, so mul((v,k),(w,m)) = (v + phi^k w, k + m).
// Two elements are equal iff their (v, k) pairs are equal.
template <typename Int>
struct Element {
  Vec<Int> v;
  std::int64_t k = 0;

  bool operator==(const Element& o) const { return k == o.k && v == o.v; }
  bool operator!=(const Element& o) const { return !(*this == o); }
  bool operator<(const Element& o) const {
    if (k != o.k) return k < o.k;
    return v < o.v;
  }

  std::string to_literal() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os << ',';
      os << v[i];
    }
    os << '|' << k;
    return os.str();
  }
};

using ElementZ = Element<BigInt>;

// Element literal "v1,...,vn|k", e.g. "5,7|3".
inline ElementZ parse_element(const std::string& text) {
  const auto bar = text.find('|');
  if (bar == std::string::npos) {
    throw ParseError("element literal needs 'v1,...,vn|k', got \"" + text + "\"");
  }
  ElementZ g;
  std::stringstream vs(text.substr(0, bar));
  std::string tok;
  while (std::getline(vs, tok, ',')) g.v.push_back(parse_bigint(tok));
  if (g.v.empty()) throw ParseError("element literal has no vector part: \"" + text + "\"");
  g.k = to_i64_checked(parse_bigint(text.substr(bar + 1)));
  return g;
}

// The group Z^n x| Z determined by a unimodular integer matrix phi; t acts
// by t a t^{-1} = phi(a). Generators are e_1^{±1},...,e_n^{±1}, t^{±1}.
template <typename Int>
class BasicPresentation {
 public:
  explicit BasicPresentation(IntMatrix<Int> phi)
      : n_(phi.n()), phi_(std::move(phi)), phi_inv_(IntMatrix<Int>::identity(n_)) {
    if (!phi_.is_unimodular()) {
      throw NonUnimodularError("phi must have determinant ±1 to act on Z^n (got " +
                               phi_.to_literal() + ")");
    }
    phi_inv_ = phi_.inverse_unimodular();
    spectral_ = spectral_decompose(phi_);
  }

  int rank() const noexcept { return n_; }
  const IntMatrix<Int>& phi() const noexcept { return phi_; }
  const IntMatrix<Int>& phi_inverse() const noexcept { return phi_inv_; }
  const SpectralDecomposition& spectral() const noexcept { return spectral_; }

  // phi^k applied to a vector, exact for any k (O(log k) matrix products).
  Vec<Int> phi_pow_apply(std::int64_t k, const Vec<Int>& v) const {
    if (k == 0) return v;
    const IntMatrix<Int>& base = k > 0 ? phi_ : phi_inv_;
    std::int64_t steps = k > 0 ? k : -k;
    if (steps <= 4) {
      Vec<Int> r = v;
      for (std::int64_t i = 0; i < steps; ++i) r = base.apply(r);
      return r;
    }
    return mat_pow(base, steps).apply(v);
  }

  Element<Int> identity() const { return Element<Int>{Vec<Int>(n_), 0}; }

  // Generator e_i^{±1} (0-based index) and t^{±1}.
  Element<Int> gen_e(int i, int sign = 1) const {
    Element<Int> g{Vec<Int>(n_), 0};
    g.v[i] = sign;
    return g;
  }
  Element<Int> gen_t(int sign = 1) const { return Element<Int>{Vec<Int>(n_), sign}; }

  std::vector<Element<Int>> generators() const {
    std::vector<Element<Int>> gs;
    for (int i = 0; i < n_; ++i) {
      gs.push_back(gen_e(i, +1));
      gs.push_back(gen_e(i, -1));
    }
    gs.push_back(gen_t(+1));
    gs.push_back(gen_t(-1));
    return gs;
  }

 private:
  int n_;
  IntMatrix<Int> phi_;
  IntMatrix<Int> phi_inv_;
  SpectralDecomposition spectral_;
};

using Presentation = BasicPresentation<BigInt>;

template <typename Int>
Element<Int> mul(const BasicPresentation<Int>& p, const Element<Int>& g,
                 const Element<Int>& h) {
  return Element<Int>{vec_add(g.v, p.phi_pow_apply(g.k, h.v)), g.k + h.k};
}

template <typename Int>
Element<Int> inv(const BasicPresentation<Int>& p, const Element<Int>& g) {
  return Element<Int>{vec_neg(p.phi_pow_apply(-g.k, g.v)), -g.k};
}

template <typename Int>
Element<Int> power(const BasicPresentation<Int>& p, const Element<Int>& g,
                   std::int64_t m) {
  Element<Int> base = m >= 0 ? g : inv(p, g);
  std::int64_t steps = m >= 0 ? m : -m;
  Element<Int> r = p.identity();
  while (steps > 0) {
    if (steps & 1) r = mul(p, r, base);
    base = mul(p, base, base);
    steps >>= 1;
  }
  return r;
}

// Cyclic subgroup whose generator has t-exponent ±1, so it is a
// transversal to the Z^n fibers. Default: H = <t>.
template <typename Int>
struct CyclicSubgroup {
  Element<Int> generator;

  explicit CyclicSubgroup(Element<Int> gen) : generator(std::move(gen)) {
    if (generator.k != 1 && generator.k != -1) {
      throw PreconditionError(
          "cyclic transversal subgroup needs a generator with t-exponent ±1");
    }
  }

  static CyclicSubgroup t_subgroup(const BasicPresentation<Int>& p) {
    return CyclicSubgroup(p.gen_t(+1));
  }
};

using CyclicSubgroupZ = CyclicSubgroup<BigInt>;

// The unique member of gH with t-exponent 0. Elements of H = <(h,s)> have
// t-exponent m*s, so g * gen^{-k*s} is that member; its vector part
// represents the coset.
template <typename Int>
Vec<Int> coset_rep(const BasicPresentation<Int>& p, const CyclicSubgroup<Int>& h,
                   const Element<Int>& g) {
  const std::int64_t s = h.generator.k;  // ±1
  const Element<Int> tail = power(p, h.generator, -g.k * s);
  return mul(p, g, tail).v;
}

// Membership test m |-> gen^m = g, solved directly from the t-exponent.
template <typename Int>
bool in_subgroup(const BasicPresentation<Int>& p, const CyclicSubgroup<Int>& h,
                 const Element<Int>& g) {
  const std::int64_t s = h.generator.k;
  const std::int64_t m = g.k * s;  // gen^m has t-exponent m*s = g.k
  return power(p, h.generator, m) == g;
}

}  // namespace pnphi
