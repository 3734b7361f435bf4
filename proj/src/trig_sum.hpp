#pragma once
// Closed-form integration of sums of terms amp * x^p * cos(freq*x + phase),
// p in {0,1}. Enough to integrate products of trigonometric eigenfunctions
// over arcs, rectangles and triangles exactly.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace obswave::detail {

struct TrigTerm {
  int xpow = 0;  // 0 or 1
  double amp = 0.0;
  double freq = 0.0;
  double phase = 0.0;
};

using TrigSum = std::vector<TrigTerm>;

inline TrigSum trigConst(double c) { return {{0, c, 0.0, 0.0}}; }
inline TrigSum trigCos(double amp, double freq) { return {{0, amp, freq, 0.0}}; }
inline TrigSum trigSin(double amp, double freq) {
  constexpr double halfPi = 1.57079632679489661923;
  return {{0, amp, freq, -halfPi}};  // sin(x) = cos(x - pi/2)
}

// product-to-sum; defined for terms whose x-powers add up to at most 1
inline TrigSum mul(const TrigSum& a, const TrigSum& b) {
  TrigSum out;
  for (const auto& s : a)
    for (const auto& t : b) {
      if (s.xpow + t.xpow > 1) throw std::logic_error("trig term power overflow");
      double amp = 0.5 * s.amp * t.amp;
      out.push_back({s.xpow + t.xpow, amp, s.freq + t.freq, s.phase + t.phase});
      out.push_back({s.xpow + t.xpow, amp, s.freq - t.freq, s.phase - t.phase});
    }
  return out;
}

// antiderivative in the term variable; input must be pure trig (xpow == 0)
inline TrigSum antiderivative(const TrigSum& a) {
  constexpr double halfPi = 1.57079632679489661923;
  TrigSum out;
  for (const auto& t : a) {
    if (t.xpow != 0) throw std::logic_error("antiderivative needs xpow 0");
    if (std::abs(t.freq) < 1e-14) {
      out.push_back({1, t.amp * std::cos(t.phase), 0.0, 0.0});  // c -> c*x
    } else {
      out.push_back({0, t.amp / t.freq, t.freq, t.phase - halfPi});  // -> amp/f sin
    }
  }
  return out;
}

// substitute x = alpha*u + beta, returning a sum in u
inline TrigSum substLinear(const TrigSum& a, double alpha, double beta) {
  TrigSum out;
  for (const auto& t : a) {
    if (t.xpow == 0) {
      out.push_back({0, t.amp, t.freq * alpha, t.freq * beta + t.phase});
    } else {
      // amp * (alpha u + beta) * cos(f*(alpha u + beta) + phi)
      double f = t.freq * alpha, phi = t.freq * beta + t.phase;
      out.push_back({1, t.amp * alpha, f, phi});
      out.push_back({0, t.amp * beta, f, phi});
    }
  }
  return out;
}

inline double integrateTerm(const TrigTerm& t, double x0, double x1) {
  if (std::abs(t.freq) < 1e-14) {
    double c = t.amp * std::cos(t.phase);
    return t.xpow == 0 ? c * (x1 - x0) : 0.5 * c * (x1 * x1 - x0 * x0);
  }
  double f = t.freq;
  if (t.xpow == 0) {
    return t.amp / f * (std::sin(f * x1 + t.phase) - std::sin(f * x0 + t.phase));
  }
  auto F = [&](double x) {
    return x * std::sin(f * x + t.phase) / f + std::cos(f * x + t.phase) / (f * f);
  };
  return t.amp * (F(x1) - F(x0));
}

inline double integrate(const TrigSum& a, double x0, double x1) {
  double s = 0;
  for (const auto& t : a) s += integrateTerm(t, x0, x1);
  return s;
}

}  // namespace obswave::detail
