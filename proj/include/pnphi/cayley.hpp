#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pnphi/fit.hpp"
#include "pnphi/group.hpp"

namespace pnphi {

struct BfsLimits {
  std::uint64_t max_elements = 50'000'000;
};

// Distance query outcome. Unreached is a distinguished state carrying the
// horizon; it is never conflated with a numeric distance, so censored
// values cannot leak into downstream fits.
class SearchResult {
 public:
  static SearchResult found(int d, int horizon) { return SearchResult(d, horizon); }
  static SearchResult unreached(int horizon) { return SearchResult(std::nullopt, horizon); }

  bool reached() const noexcept { return dist_.has_value(); }
  int distance() const {
    if (!dist_) throw PreconditionError("distance() on an Unreached result");
    return *dist_;
  }
  int horizon() const noexcept { return horizon_; }

 private:
  SearchResult(std::optional<int> d, int horizon) : dist_(d), horizon_(horizon) {}
  std::optional<int> dist_;
  int horizon_;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// (v, k) packed into one 64-bit key with per-run field widths; the bound
// proof in EngineContext guarantees every reachable element fits.
struct PackedCodec {
  int n = 0;
  int vbits = 0;
  int kbits = 0;
  std::int64_t vmin = 0, vmax = 0;
  std::int64_t kmin = 0, kmax = 0;

  static int bits_for(std::uint64_t count) {
    int b = 0;
    while ((1ULL << b) < count) ++b;
    return b;
  }

  bool in_range(const std::int64_t* coords, std::int64_t k) const {
    if (k < kmin || k > kmax) return false;
    for (int i = 0; i < n; ++i) {
      if (coords[i] < vmin || coords[i] > vmax) return false;
    }
    return true;
  }

  std::uint64_t encode(const std::int64_t* coords, std::int64_t k) const {
    std::uint64_t key = static_cast<std::uint64_t>(k - kmin);
    for (int i = 0; i < n; ++i) {
      key = (key << vbits) | static_cast<std::uint64_t>(coords[i] - vmin);
    }
    return key;
  }

  void decode(std::uint64_t key, std::int64_t* coords, std::int64_t& k) const {
    const std::uint64_t vmask = (vbits == 64) ? ~0ULL : ((1ULL << vbits) - 1);
    for (int i = n - 1; i >= 0; --i) {
      coords[i] = static_cast<std::int64_t>(key & vmask) + vmin;
      key >>= vbits;
    }
    k = static_cast<std::int64_t>(key) + kmin;
  }
};

// Open-addressing hash map uint64 -> uint8 distance, linear probing.
// Memory is the binding constraint of ball computations, so slots are a
// bare key array plus a byte array.
class FlatMap {
 public:
  static constexpr std::uint64_t kEmpty = ~0ULL;

  explicit FlatMap(std::size_t expected = 1024) {
    std::size_t cap = 64;
    while (cap * 7 < expected * 10) cap <<= 1;
    keys_.assign(cap, kEmpty);
    vals_.assign(cap, 0);
    mask_ = cap - 1;
  }

  std::size_t size() const noexcept { return size_; }

  bool insert_if_absent(std::uint64_t key, std::uint8_t val) {
    if ((size_ + 1) * 10 > (mask_ + 1) * 7) grow();
    std::size_t i = mix64(key) & mask_;
    while (keys_[i] != kEmpty) {
      if (keys_[i] == key) return false;
      i = (i + 1) & mask_;
    }
    keys_[i] = key;
    vals_[i] = val;
    ++size_;
    return true;
  }

  std::optional<std::uint8_t> find(std::uint64_t key) const {
    std::size_t i = mix64(key) & mask_;
    while (keys_[i] != kEmpty) {
      if (keys_[i] == key) return vals_[i];
      i = (i + 1) & mask_;
    }
    return std::nullopt;
  }

  bool contains(std::uint64_t key) const { return find(key).has_value(); }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i <= mask_; ++i) {
      if (keys_[i] != kEmpty) f(keys_[i], vals_[i]);
    }
  }

 private:
  void grow() {
    std::vector<std::uint64_t> old_keys = std::move(keys_);
    std::vector<std::uint8_t> old_vals = std::move(vals_);
    const std::size_t cap = (mask_ + 1) << 1;
    keys_.assign(cap, kEmpty);
    vals_.assign(cap, 0);
    mask_ = cap - 1;
    for (std::size_t i = 0; i < old_keys.size(); ++i) {
      if (old_keys[i] == kEmpty) continue;
      std::size_t j = mix64(old_keys[i]) & mask_;
      while (keys_[j] != kEmpty) j = (j + 1) & mask_;
      keys_[j] = old_keys[i];
      vals_[j] = old_vals[i];
    }
  }

  std::vector<std::uint64_t> keys_;
  std::vector<std::uint8_t> vals_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

constexpr int kMaxRank = 8;

// Per-run tables: generator displacement columns phi^j(±e_i) for every
// reachable t-level j, narrowed to int64 after an exact BigInt bound proof.
struct EngineContext {
  PackedCodec codec;
  int n = 0;
  std::int64_t jmin = 0;
  // cols[j - jmin][i] = column i of phi^j.
  std::vector<std::vector<std::array<std::int64_t, kMaxRank>>> cols;
};

inline EngineContext build_context(const BasicPresentation<BigInt>& p,
                                   const std::vector<ElementZ>& sources,
                                   const std::vector<ElementZ>& targets, int rmax) {
  if (rmax < 0) throw PreconditionError("BFS horizon must be >= 0");
  if (rmax > 200) throw PreconditionError("BFS horizon above the distance-byte limit (200)");
  const int n = p.rank();
  if (n > kMaxRank) throw OverflowError("BFS engine supports rank <= 8");

  std::int64_t kmin = 0, kmax = 0;
  BigInt coord_bound = 0;
  auto absorb = [&](const ElementZ& g) {
    kmin = std::min(kmin, g.k);
    kmax = std::max(kmax, g.k);
    for (const auto& x : g.v) coord_bound = std::max(coord_bound, int_abs(x));
  };
  for (const auto& g : sources) absorb(g);
  for (const auto& g : targets) absorb(g);

  const std::int64_t jmin = kmin - rmax;
  const std::int64_t jmax = kmax + rmax;

  // Exact per-step displacement bound over all reachable levels.
  BigInt max_entry = 0;
  std::vector<IntMatrixZ> powers;
  {
    IntMatrixZ cur = mat_pow(p.phi(), jmin);
    for (std::int64_t j = jmin; j <= jmax; ++j) {
      powers.push_back(cur);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) max_entry = std::max(max_entry, int_abs(cur.at(a, b)));
      if (j < jmax) cur = p.phi() * cur;
    }
  }
  coord_bound += BigInt(rmax) * max_entry;

  EngineContext ctx;
  ctx.n = n;
  ctx.jmin = jmin;
  ctx.codec.n = n;
  ctx.codec.kmin = jmin;
  ctx.codec.kmax = jmax;
  ctx.codec.kbits = PackedCodec::bits_for(static_cast<std::uint64_t>(jmax - jmin + 1));

  if (coord_bound > BigInt(std::numeric_limits<std::int64_t>::max() / 4)) {
    throw OverflowError("BFS coordinate bound exceeds the 64-bit fast path: " +
                        coord_bound.str());
  }
  const std::int64_t bound = to_i64_checked(coord_bound);
  ctx.codec.vmin = -bound;
  ctx.codec.vmax = bound;
  ctx.codec.vbits = PackedCodec::bits_for(static_cast<std::uint64_t>(2 * bound + 1));
  if (ctx.codec.vbits * n + ctx.codec.kbits > 63) {
    std::ostringstream os;
    os << "BFS state does not fit a packed 64-bit key (rank " << n << ", coordinate bound "
       << bound << ", t-range [" << jmin << ", " << jmax << "]); reduce the radius or window";
    throw OverflowError(os.str());
  }

  ctx.cols.resize(powers.size());
  for (std::size_t idx = 0; idx < powers.size(); ++idx) {
    ctx.cols[idx].resize(n);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < n; ++a) {
        ctx.cols[idx][static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] =
            to_i64_checked(powers[idx].at(a, i));
      }
    }
  }
  return ctx;
}

}  // namespace detail

// Result of an exact breadth-first search over the Cayley graph with
// generators e_1^{±1},...,e_n^{±1}, t^{±1}. Immutable and shareable;
// counts()[r] = number of discovered elements at distance <= r from the
// source set.
class Ball {
 public:
  int radius() const noexcept { return radius_; }
  int completed_radius() const noexcept { return completed_radius_; }
  bool exhausted() const noexcept { return exhausted_; }
  std::size_t size() const noexcept { return map_.size(); }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  std::optional<int> distance(const ElementZ& g) const {
    std::int64_t coords[detail::kMaxRank];
    if (static_cast<int>(g.v.size()) != ctx_.n) return std::nullopt;
    for (int i = 0; i < ctx_.n; ++i) {
      if (g.v[i] < ctx_.codec.vmin || g.v[i] > ctx_.codec.vmax) return std::nullopt;
      coords[i] = static_cast<std::int64_t>(g.v[i]);
    }
    if (!ctx_.codec.in_range(coords, g.k)) return std::nullopt;
    const auto d = map_.find(ctx_.codec.encode(coords, g.k));
    if (!d) return std::nullopt;
    return static_cast<int>(*d);
  }

  // Visit every discovered element as (coords, k, dist); the coordinate
  // buffer is reused between calls.
  template <typename F>
  void for_each(F&& f) const {
    std::vector<std::int64_t> coords(static_cast<std::size_t>(ctx_.n));
    map_.for_each([&](std::uint64_t key, std::uint8_t d) {
      std::int64_t k;
      ctx_.codec.decode(key, coords.data(), k);
      f(coords, k, static_cast<int>(d));
    });
  }

 private:
  friend Ball run_bfs(const Presentation&, const std::vector<ElementZ>&, int,
                      const BfsLimits&, const std::vector<ElementZ>*, SearchResult*);

  detail::EngineContext ctx_;
  detail::FlatMap map_;
  std::vector<std::uint64_t> counts_;
  int radius_ = 0;
  int completed_radius_ = 0;
  bool exhausted_ = false;
};

// Multi-source BFS; when `targets` is given the search stops at the first
// hit and reports it through `hit`.
inline Ball run_bfs(const Presentation& p, const std::vector<ElementZ>& sources,
                    int rmax, const BfsLimits& limits,
                    const std::vector<ElementZ>* targets = nullptr,
                    SearchResult* hit = nullptr) {
  if (sources.empty()) throw PreconditionError("BFS needs a nonempty source set");
  static const std::vector<ElementZ> kNoTargets;
  Ball ball;
  ball.ctx_ = detail::build_context(p, sources, targets ? *targets : kNoTargets, rmax);
  const auto& codec = ball.ctx_.codec;
  const int n = ball.ctx_.n;

  detail::FlatMap target_set(targets ? targets->size() * 2 : 2);
  if (targets) {
    std::int64_t coords[detail::kMaxRank];
    for (const auto& g : *targets) {
      for (int i = 0; i < n; ++i) coords[i] = to_i64_checked(g.v[i]);
      target_set.insert_if_absent(codec.encode(coords, g.k), 0);
    }
  }

  if (hit) *hit = SearchResult::unreached(rmax);
  bool found = false;

  std::vector<std::uint64_t> frontier;
  {
    std::int64_t coords[detail::kMaxRank];
    for (const auto& g : sources) {
      for (int i = 0; i < n; ++i) coords[i] = to_i64_checked(g.v[i]);
      const std::uint64_t key = codec.encode(coords, g.k);
      if (ball.map_.insert_if_absent(key, 0)) frontier.push_back(key);
      if (targets && !found && target_set.contains(key)) {
        if (hit) *hit = SearchResult::found(0, rmax);
        found = true;
      }
    }
  }
  ball.counts_.push_back(ball.map_.size());
  if (found) return ball;

  std::vector<std::uint64_t> next;
  std::int64_t coords[detail::kMaxRank];
  std::int64_t moved[detail::kMaxRank];
  for (int r = 1; r <= rmax; ++r) {
    next.clear();
    for (const std::uint64_t key : frontier) {
      std::int64_t k;
      codec.decode(key, coords, k);
      const auto try_insert = [&](const std::int64_t* c, std::int64_t kk) {
        const std::uint64_t nk = codec.encode(c, kk);
        if (ball.map_.insert_if_absent(nk, static_cast<std::uint8_t>(r))) {
          next.push_back(nk);
          if (targets && !found && target_set.contains(nk)) {
            if (hit) *hit = SearchResult::found(r, rmax);
            found = true;
          }
        }
      };
      if (k + 1 <= codec.kmax) try_insert(coords, k + 1);
      if (k - 1 >= codec.kmin) try_insert(coords, k - 1);
      const auto& level_cols = ball.ctx_.cols[static_cast<std::size_t>(k - ball.ctx_.jmin)];
      for (int i = 0; i < n; ++i) {
        const auto& col = level_cols[static_cast<std::size_t>(i)];
        for (int a = 0; a < n; ++a) moved[a] = coords[a] + col[a];
        try_insert(moved, k);
        for (int a = 0; a < n; ++a) moved[a] = coords[a] - col[a];
        try_insert(moved, k);
      }
      if (ball.map_.size() > limits.max_elements) {
        ball.exhausted_ = true;
        ball.radius_ = rmax;
        ball.completed_radius_ = r - 1;
        return ball;
      }
    }
    frontier.swap(next);
    ball.counts_.push_back(ball.map_.size());
    ball.completed_radius_ = r;
    if (found) break;
  }
  ball.radius_ = rmax;
  return ball;
}

// Exact ball of radius r around the identity. Throws BudgetError (naming
// the last completed radius) if the element budget is exhausted.
inline Ball ball(const Presentation& p, int r, const BfsLimits& limits = {}) {
  Ball b = run_bfs(p, {p.identity()}, r, limits);
  if (b.exhausted()) {
    throw BudgetError("ball(" + std::to_string(r) + ") exceeded the element budget; last completed radius " +
                          std::to_string(b.completed_radius()),
                      b.completed_radius());
  }
  return b;
}

// d(g, h) = d(1, g^{-1} h), exact within the horizon.
inline SearchResult word_distance(const Presentation& p, const ElementZ& g,
                                  const ElementZ& h, int rmax,
                                  const BfsLimits& limits = {}) {
  if (rmax < 0) throw PreconditionError("word_distance horizon must be >= 0");
  const ElementZ target = mul(p, inv(p, g), h);
  SearchResult res = SearchResult::unreached(rmax);
  std::vector<ElementZ> targets{target};
  run_bfs(p, {p.identity()}, rmax, limits, &targets, &res);
  return res;
}

// inf{d(x,y) : x in X, y in Y} by multi-source BFS from X until Y is met.
inline SearchResult set_distance(const Presentation& p, const std::vector<ElementZ>& xs,
                                 const std::vector<ElementZ>& ys, int rmax,
                                 const BfsLimits& limits = {}) {
  if (xs.empty() || ys.empty()) {
    throw PreconditionError("set_distance needs nonempty element sets");
  }
  SearchResult res = SearchResult::unreached(rmax);
  run_bfs(p, xs, rmax, limits, &ys, &res);
  return res;
}

// Distance between the left cosets a*H and b*H, both truncated to
// generator powers |i| <= window. Values <= rmax are exact for the
// truncated sets: the t-exponent is 1-Lipschitz, so no geodesic of length
// <= rmax leaves the retained levels.
inline SearchResult coset_distance(const Presentation& p, const CyclicSubgroupZ& h,
                                   const Vec<BigInt>& a, const Vec<BigInt>& b, int rmax,
                                   int window, const BfsLimits& limits = {}) {
  if (window < rmax) {
    throw PreconditionError("coset truncation window must be >= the BFS horizon");
  }
  std::vector<ElementZ> xs, ys;
  const ElementZ ea{a, 0}, eb{b, 0};
  for (int i = -window; i <= window; ++i) {
    const ElementZ hi = power(p, h.generator, i);
    xs.push_back(mul(p, ea, hi));
    ys.push_back(mul(p, eb, hi));
  }
  return set_distance(p, xs, ys, rmax, limits);
}

// Ball counts together with the growth-model fit.
struct GrowthSeries {
  std::vector<std::uint64_t> counts;
  GrowthFit fit;
  int requested_radius = 0;
  int completed_radius = 0;
  bool exhausted = false;
};

inline GrowthSeries growth_series(const Presentation& p, int rmax,
                                  const BfsLimits& limits = {}) {
  if (rmax < 4) throw PreconditionError("growth series needs rmax >= 4");
  const Ball b = run_bfs(p, {p.identity()}, rmax, limits);
  GrowthSeries s;
  s.requested_radius = rmax;
  s.completed_radius = b.completed_radius();
  s.exhausted = b.exhausted();
  s.counts.assign(b.counts().begin(),
                  b.counts().begin() + (b.completed_radius() + 1));
  if (s.completed_radius < 4) {
    throw BudgetError("growth series exhausted the budget before radius 4",
                      s.completed_radius);
  }
  s.fit = fit_growth(s.counts);
  return s;
}

}  // namespace pnphi
