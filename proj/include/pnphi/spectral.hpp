#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "pnphi/matrix.hpp"

namespace pnphi {

inline constexpr double kUnitCircleTol = 1e-9;

template <typename T>
double to_double_generic(const T& x) {
  if constexpr (std::is_same_v<T, BigInt>) {
    return to_double(x);
  } else {
    return static_cast<double>(x);
  }
}

struct SpectralFlags {
  bool hyperbolic = false;
  bool diagonalizable_over_R = false;
  bool all_real = false;
  bool all_positive = false;
};

// Dimensions of the root-space splitting R^n = E- + E+ + E0.
struct Splitting {
  int dim_contracting = 0;  // |lambda| < 1
  int dim_expanding = 0;    // |lambda| > 1
  int dim_neutral = 0;      // |lambda| = 1 (within tolerance)
};

struct SpectralDecomposition {
  int n = 0;
  std::vector<std::complex<double>> eigenvalues;  // sorted by |.| descending
  // Column j is the eigenvector for eigenvalues[j].
  std::vector<std::vector<std::complex<double>>> eigenbasis;
  double rho = 0.0;
  SpectralFlags flags;
  Splitting splitting;
  bool exact_quadratic = false;  // n = 2: closed-form roots of x^2 - tr x + det
  bool basis_reliable = true;
  double basis_condition = 1.0;
  double det = 0.0;
  double trace = 0.0;
};

namespace detail {

inline void finalize_decomposition(SpectralDecomposition& s) {
  std::stable_sort(s.eigenvalues.begin(), s.eigenvalues.end(),
                   [](const std::complex<double>& a, const std::complex<double>& b) {
                     return std::abs(a) > std::abs(b);
                   });
  s.rho = s.eigenvalues.empty() ? 0.0 : std::abs(s.eigenvalues.front());
  s.flags.all_real = true;
  s.flags.all_positive = true;
  s.splitting = Splitting{};
  for (const auto& l : s.eigenvalues) {
    const double a = std::abs(l);
    const bool real = std::abs(l.imag()) <= kUnitCircleTol * std::max(1.0, a);
    if (!real) s.flags.all_real = false;
    if (!real || l.real() <= 0.0) s.flags.all_positive = false;
    if (a < 1.0 - kUnitCircleTol) {
      ++s.splitting.dim_contracting;
    } else if (a > 1.0 + kUnitCircleTol) {
      ++s.splitting.dim_expanding;
    } else {
      ++s.splitting.dim_neutral;
    }
  }
  s.flags.hyperbolic = (s.splitting.dim_neutral == 0);
}

// Kernel direction of (M - lambda I), unit length; the sign convention
// (first nonzero component positive) keeps outputs deterministic.
template <typename Int>
std::vector<std::complex<double>> eigvec2(const IntMatrix<Int>& m, double lambda) {
  const double a = to_double_generic(m.at(0, 0));
  const double b = to_double_generic(m.at(0, 1));
  const double c = to_double_generic(m.at(1, 0));
  const double d = to_double_generic(m.at(1, 1));
  double vx, vy;
  if (std::abs(b) >= std::abs(c)) {
    vx = b;
    vy = lambda - a;
  } else {
    vx = lambda - d;
    vy = c;
  }
  if (std::abs(vx) + std::abs(vy) == 0.0) {
    vx = 1.0;
    vy = 0.0;
  }
  const double norm = std::hypot(vx, vy);
  vx /= norm;
  vy /= norm;
  if (vx < 0.0 || (vx == 0.0 && vy < 0.0)) {
    vx = -vx;
    vy = -vy;
  }
  return {{vx, 0.0}, {vy, 0.0}};
}

}  // namespace detail

// Eigenvalues, eigenbasis, spectral radius and the E-/E+/E0 splitting.
// n = 2 is solved by the quadratic formula on the characteristic
// polynomial; larger n uses an iterative numeric solver. A badly
// conditioned eigenbasis clears diagonalizable_over_R and marks the basis
// unreliable rather than failing.
template <typename Int>
SpectralDecomposition spectral_decompose(const IntMatrix<Int>& m,
                                         double cond_threshold = 1e12) {
  SpectralDecomposition s;
  s.n = m.n();
  s.det = to_double_generic(m.determinant());
  s.trace = to_double_generic(m.trace());

  if (s.n == 2) {
    s.exact_quadratic = true;
    const double tr = s.trace;
    const double det = s.det;
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      // Larger-magnitude root first, the other via det/r1 (no cancellation).
      const double r1 = (tr >= 0.0) ? (tr + sq) / 2.0 : (tr - sq) / 2.0;
      const double r2 = (r1 != 0.0) ? det / r1 : 0.0;
      s.eigenvalues = {std::complex<double>(r1, 0.0), std::complex<double>(r2, 0.0)};
      if (disc > 0.0) {
        s.flags.diagonalizable_over_R = true;
        s.eigenbasis = {detail::eigvec2(m, r1), detail::eigvec2(m, r2)};
      } else {
        // Repeated root: diagonalizable over R iff m is already scalar.
        const bool scalar = (m.at(0, 1) == 0 && m.at(1, 0) == 0 && m.at(0, 0) == m.at(1, 1));
        s.flags.diagonalizable_over_R = scalar;
        s.eigenbasis = {{{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {1.0, 0.0}}};
        s.basis_reliable = scalar;
        if (!scalar) s.basis_condition = 1e300;
      }
    } else {
      const double re = tr / 2.0;
      const double im = std::sqrt(-disc) / 2.0;
      s.eigenvalues = {std::complex<double>(re, im), std::complex<double>(re, -im)};
      s.flags.diagonalizable_over_R = false;
      s.eigenbasis = {{{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {1.0, 0.0}}};
    }
    detail::finalize_decomposition(s);
    return s;
  }

  Eigen::MatrixXd a(s.n, s.n);
  for (int i = 0; i < s.n; ++i)
    for (int j = 0; j < s.n; ++j) a(i, j) = to_double_generic(m.at(i, j));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
  const auto& vals = solver.eigenvalues();
  const auto& vecs = solver.eigenvectors();

  std::vector<int> order(s.n);
  for (int i = 0; i < s.n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return std::abs(vals(i)) > std::abs(vals(j));
  });
  for (int idx : order) {
    s.eigenvalues.push_back(vals(idx));
    std::vector<std::complex<double>> col(s.n);
    for (int i = 0; i < s.n; ++i) col[i] = vecs(i, idx);
    s.eigenbasis.push_back(std::move(col));
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vecs);
  const double smin = svd.singularValues()(s.n - 1);
  s.basis_condition = smin > 0.0 ? svd.singularValues()(0) / smin : 1e300;
  s.basis_reliable = s.basis_condition < cond_threshold;
  detail::finalize_decomposition(s);
  s.flags.diagonalizable_over_R = s.flags.all_real && s.basis_reliable;
  return s;
}

// Real eigenframe for matrices with an all-real diagonalizable spectrum:
// unit eigenvector columns plus dual rows (the inverse basis), used for
// orbit-window certification and the Sol lattice embedding.
struct EigenFrame {
  int n = 0;
  std::vector<double> lambdas;             // sorted |.| descending
  std::vector<std::vector<double>> cols;   // unit eigenvectors
  std::vector<std::vector<double>> duals;  // rows of cols^{-1}
  std::vector<double> dual_norms;

  // v's coordinate along eigenvector i; any |v| >= |coord|/|dual_i|.
  template <typename Seq>
  double coord(const Seq& v, int i) const {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += duals[i][j] * to_double_generic(v[j]);
    return s;
  }
};

inline EigenFrame real_eigenframe(const SpectralDecomposition& s) {
  if (!s.flags.all_real || !s.flags.diagonalizable_over_R || !s.basis_reliable) {
    throw HypothesisError(
        "real eigenframe requires an all-real, reliably diagonalizable spectrum");
  }
  EigenFrame f;
  f.n = s.n;
  Eigen::MatrixXd v(s.n, s.n);
  for (int j = 0; j < s.n; ++j) {
    f.lambdas.push_back(s.eigenvalues[j].real());
    std::vector<double> col(s.n);
    for (int i = 0; i < s.n; ++i) {
      col[i] = s.eigenbasis[j][i].real();
      v(i, j) = col[i];
    }
    f.cols.push_back(std::move(col));
  }
  Eigen::MatrixXd vinv = v.inverse();
  for (int i = 0; i < s.n; ++i) {
    std::vector<double> row(s.n);
    double norm2 = 0.0;
    for (int j = 0; j < s.n; ++j) {
      row[j] = vinv(i, j);
      norm2 += row[j] * row[j];
    }
    f.duals.push_back(std::move(row));
    f.dual_norms.push_back(std::sqrt(norm2));
  }
  return f;
}

// --- orbit classification (finite-window, tolerance-based) ---

enum class OrbitClass {
  forward_contracting,       // v in E- (within tolerance)
  backward_contracting,      // v in E+
  bidirectionally_divergent  // v outside both
};

struct OrbitClassification {
  OrbitClass cls;
  double forward_rate;   // measured (|M^w v| / |v|)^{1/w}
  double backward_rate;  // same for M^{-1}
  int window;
};

// Classify a real vector against the stable/unstable splitting of a
// hyperbolic matrix and measure contraction rates over a finite iterate
// window. Membership tolerance is relative (default 1e-8). The window is
// capped so float contamination from the complementary subspace stays
// below the measurement scale; the asymptotic rates themselves are the
// eigenvalue magnitudes, which the measured rates approximate.
template <typename Int>
OrbitClassification classify_orbit(const IntMatrix<Int>& m,
                                   const SpectralDecomposition& s,
                                   const std::vector<double>& v,
                                   double tol = 1e-8) {
  if (!s.flags.hyperbolic) {
    throw HypothesisError("orbit classification requires a hyperbolic matrix");
  }
  if (std::abs(s.det) < 0.5) {
    throw HypothesisError("orbit classification requires an invertible matrix");
  }
  double vnorm = 0.0;
  for (double x : v) vnorm += x * x;
  vnorm = std::sqrt(vnorm);
  if (vnorm == 0.0) throw PreconditionError("cannot classify the zero vector");

  const EigenFrame f = real_eigenframe(s);
  double in_contracting = 0.0, in_expanding = 0.0;
  for (int i = 0; i < f.n; ++i) {
    const double c = std::abs(f.coord(v, i)) / f.dual_norms[i];
    if (std::abs(f.lambdas[i]) < 1.0) {
      in_contracting = std::max(in_contracting, c);
    } else {
      in_expanding = std::max(in_expanding, c);
    }
  }
  const bool in_minus = in_expanding <= tol * vnorm;
  const bool in_plus = in_contracting <= tol * vnorm;
  if (in_minus && in_plus) {
    throw PreconditionError("vector is within tolerance of both E- and E+");
  }

  const double lam_max = s.rho;
  const double lam_min = std::abs(s.eigenvalues.back());
  const double gap = lam_max / std::max(lam_min, 1e-300);
  const int window = std::max(
      4, std::min(20, static_cast<int>(std::log(1e6) / std::max(1e-9, std::log(gap)))));

  Eigen::MatrixXd a(f.n, f.n);
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j) a(i, j) = to_double_generic(m.at(i, j));
  const Eigen::MatrixXd ainv = a.inverse();
  Eigen::VectorXd x(f.n);
  for (int i = 0; i < f.n; ++i) x(i) = v[i];

  const auto measured_rate = [&](const Eigen::MatrixXd& step) {
    Eigen::VectorXd y = x;
    const double n0 = y.norm();
    for (int i = 0; i < window; ++i) y = step * y;
    return std::pow(y.norm() / n0, 1.0 / window);
  };

  OrbitClassification r{};
  r.window = window;
  r.forward_rate = measured_rate(a);
  r.backward_rate = measured_rate(ainv);
  if (in_minus) {
    r.cls = OrbitClass::forward_contracting;
  } else if (in_plus) {
    r.cls = OrbitClass::backward_contracting;
  } else {
    r.cls = OrbitClass::bidirectionally_divergent;
  }
  return r;
}

}  // namespace pnphi
