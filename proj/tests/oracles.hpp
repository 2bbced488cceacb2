#pragma once

// Reference computations used only by the tests. They are written from the
// model definitions directly and share no code with the library.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace relay::testing {

/// Two-walker lattice state with both positions kept explicitly.
struct FullState {
  int x1, x2, d1, d2, carrier;  // directions +1/-1, carrier 0 or 1
};

/// Indexing of the (N^2 * 8)-state chain.
struct FullChain {
  int N;
  double eps;
  [[nodiscard]] int size() const { return N * N * 8; }
  [[nodiscard]] int index(const FullState& s) const {
    return (((s.x1 * N + s.x2) * 2 + (s.d1 > 0)) * 2 + (s.d2 > 0)) * 2 + s.carrier;
  }
  [[nodiscard]] FullState state(int i) const {
    FullState s{};
    s.carrier = i % 2;
    i /= 2;
    s.d2 = (i % 2) ? 1 : -1;
    i /= 2;
    s.d1 = (i % 2) ? 1 : -1;
    i /= 2;
    s.x2 = i % N;
    s.x1 = i / N;
    return s;
  }
  /// Move, flip each walker with probability eps, then pass the message to a
  /// co-located walker heading +1 if the carrier heads -1.
  [[nodiscard]] FullState successor(FullState s, bool flip1, bool flip2) const {
    s.x1 = ((s.x1 + s.d1) % N + N) % N;
    s.x2 = ((s.x2 + s.d2) % N + N) % N;
    if (flip1) s.d1 = -s.d1;
    if (flip2) s.d2 = -s.d2;
    if (s.x1 == s.x2) {
      const int dc = s.carrier == 0 ? s.d1 : s.d2;
      const int dother = s.carrier == 0 ? s.d2 : s.d1;
      if (dc == -1 && dother == 1) s.carrier = 1 - s.carrier;
    }
    return s;
  }
  /// Stationary law by power iteration from the uniform distribution.
  [[nodiscard]] std::vector<double> stationary(int iterations = 200000, double tol = 1e-15) const {
    const int n = size();
    std::vector<double> p(static_cast<std::size_t>(n), 1.0 / n), q(p.size());
    for (int it = 0; it < iterations; ++it) {
      std::fill(q.begin(), q.end(), 0.0);
      for (int i = 0; i < n; ++i) {
        const auto s = state(i);
        for (int f1 = 0; f1 < 2; ++f1) {
          for (int f2 = 0; f2 < 2; ++f2) {
            const double w = (f1 ? eps : 1 - eps) * (f2 ? eps : 1 - eps);
            q[static_cast<std::size_t>(index(successor(s, f1, f2)))] += w * p[static_cast<std::size_t>(i)];
          }
        }
      }
      double diff = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) diff = std::max(diff, std::abs(q[k] - p[k]));
      p.swap(q);
      if (diff < tol) break;
    }
    return p;
  }
};

/// Exact rational arithmetic for small closed-form checks.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  Rational(std::int64_t n = 0, std::int64_t d = 1) : num(n), den(d) { normalize(); }
  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const auto g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
  friend Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
  [[nodiscard]] double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// (1 - eps) / (2 (1 + eps (N - 2))) with eps = p/q, exactly.
inline Rational lattice_speed(std::int64_t N, Rational eps) {
  return (Rational(1) - eps) / (Rational(2) * (Rational(1) + eps * Rational(N - 2)));
}

}  // namespace relay::testing
