#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "pnphi/rng.hpp"
#include "pnphi/spectral.hpp"

namespace pnphi {

struct NormCertificate {
  bool certified = false;
  int window = 0;               // m: number of iterates in the sum
  std::size_t samples = 0;      // random unit directions tested
  double observed_sup = 0.0;    // max sampled N(Mv)/N(v)
  double bound = 0.0;           // rho + delta
};

// Finite-window norm N(v) = sum_{i=0..m} (rho+delta)^{-i} |M^i v|_2,
// which pulls the operator ratio of M below rho + delta. The certificate
// records the sampled supremum; construction fails loudly if no window up
// to max_window certifies.
class AdaptedNorm {
 public:
  template <typename Int>
  AdaptedNorm(const IntMatrix<Int>& m, double delta, double rho, int window)
      : n_(m.n()), delta_(delta), rho_(rho) {
    const double base = rho + delta;
    std::vector<double> mat(static_cast<std::size_t>(n_) * n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) mat[i * n_ + j] = to_double_generic(m.at(i, j));
    powers_.push_back(identity_double(n_));
    for (int i = 1; i <= window + 1; ++i) {
      powers_.push_back(mul_double(mat, powers_.back(), n_));
    }
    double w = 1.0;
    for (int i = 0; i <= window; ++i) {
      weights_.push_back(w);
      w /= base;
    }
  }

  int dim() const noexcept { return n_; }
  double delta() const noexcept { return delta_; }
  double rho() const noexcept { return rho_; }
  int window() const noexcept { return static_cast<int>(weights_.size()) - 1; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  double operator()(const std::vector<double>& v) const {
    double s = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      s += weights_[i] * image_norm(powers_[i], v);
    }
    return s;
  }

  // N(Mv)/N(v); powers_ holds one extra iterate so this needs no matvec.
  double operator_ratio(const std::vector<double>& v) const {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      num += weights_[i] * image_norm(powers_[i + 1], v);
      den += weights_[i] * image_norm(powers_[i], v);
    }
    return num / den;
  }

  const NormCertificate& certificate() const noexcept { return cert_; }

 private:
  friend struct AdaptedNormBuilder;

  static std::vector<double> identity_double(int n) {
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) m[i * n + i] = 1.0;
    return m;
  }

  static std::vector<double> mul_double(const std::vector<double>& a,
                                        const std::vector<double>& b, int n) {
    std::vector<double> r(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const double aik = a[i * n + k];
        for (int j = 0; j < n; ++j) r[i * n + j] += aik * b[k * n + j];
      }
    return r;
  }

  double image_norm(const std::vector<double>& mat, const std::vector<double>& v) const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) {
      double x = 0.0;
      for (int j = 0; j < n_; ++j) x += mat[i * n_ + j] * v[j];
      s += x * x;
    }
    return std::sqrt(s);
  }

  int n_;
  double delta_;
  double rho_;
  std::vector<std::vector<double>> powers_;
  std::vector<double> weights_;
  NormCertificate cert_;
};

struct AdaptedNormOptions {
  int max_window = 64;
  std::size_t samples = 10000;
  std::uint64_t seed = kDefaultSeed;
};

struct AdaptedNormBuilder {
  template <typename Int>
  static AdaptedNorm build(const IntMatrix<Int>& m, double delta,
                           const AdaptedNormOptions& opt) {
    if (delta <= 0.0) throw PreconditionError("adapted norm requires delta > 0");
    const SpectralDecomposition s = spectral_decompose(m);
    const double bound = s.rho + delta;
    double last_sup = 0.0;
    for (int window = 1; window <= opt.max_window; ++window) {
      AdaptedNorm norm(m, delta, s.rho, window);
      Rng rng(opt.seed);
      double sup = 0.0;
      for (std::size_t i = 0; i < opt.samples; ++i) {
        sup = std::max(sup, norm.operator_ratio(rng.next_unit_vector(m.n())));
      }
      last_sup = sup;
      if (sup < bound) {
        norm.cert_.certified = true;
        norm.cert_.window = window;
        norm.cert_.samples = opt.samples;
        norm.cert_.observed_sup = sup;
        norm.cert_.bound = bound;
        return norm;
      }
    }
    std::ostringstream os;
    os << "adapted-norm certification failed: no window m <= " << opt.max_window
       << " achieves sampled ratio < " << bound << " (last observed " << last_sup
       << " over " << opt.samples << " samples)";
    throw CertificationError(os.str());
  }
};

template <typename Int>
AdaptedNorm adapted_norm(const IntMatrix<Int>& m, double delta,
                         const AdaptedNormOptions& opt = {}) {
  return AdaptedNormBuilder::build(m, delta, opt);
}

}  // namespace pnphi
