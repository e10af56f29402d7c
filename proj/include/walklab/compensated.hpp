#pragma once

namespace walklab {

/// Unevaluated sum hi + lo carrying roughly twice double precision. Used for
/// running sums whose exact identities are checked (A_n, Xi_n, X_n).
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr explicit DoubleDouble(double v) : hi(v) {}

  constexpr DoubleDouble& operator+=(double b) noexcept {
    const double s = hi + b;
    const double bb = s - hi;
    double e = (hi - (s - bb)) + (b - bb);
    e += lo;
    hi = s + e;
    lo = e - (hi - s);
    return *this;
  }

  constexpr DoubleDouble& operator+=(const DoubleDouble& b) noexcept {
    *this += b.hi;
    *this += b.lo;
    return *this;
  }

  constexpr DoubleDouble operator-() const noexcept { return {-hi, -lo}; }

  constexpr double value() const noexcept { return hi + lo; }

 private:
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}
};

constexpr DoubleDouble operator+(DoubleDouble a, const DoubleDouble& b) noexcept { return a += b; }
constexpr DoubleDouble operator-(DoubleDouble a, const DoubleDouble& b) noexcept { return a += -b; }

}  // namespace walklab
