#pragma once

// Explicit constants of the linear lower bound nu_k >= c0 k: the first zero j
// of J0, the Faber-Krahn constant pi j^2, the admissible epsilon interval,
// c0(eps), its maximiser and the closed form of the maximum.
//
// Every function taking `j2` accepts a replacement for j^2 so the effect of a
// better Faber-Krahn-type constant can be evaluated.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "minpart/errors.hpp"
#include "minpart/weyl_counting.hpp"

namespace minpart {

/// J0 by its power series; accurate to a few ulps for |x| <= 4.
inline double bessel_j0(double x) {
  const double q = -0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

/// First positive zero of J0, bisected on [2, 3] to full double precision.
inline double bessel_j01() {
  double lo = 2.0, hi = 3.0;  // J0(2) > 0 > J0(3)
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (bessel_j0(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double j01_squared() {
  static const double j = bessel_j01();
  return j * j;
}

inline double faber_krahn_constant(double j2 = j01_squared()) { return std::numbers::pi * j2; }

struct FaberKrahnCheck {
  double value = 0.0;
  double constant = 0.0;
  bool satisfied = false;
};

/// A(Omega) L_k / k against pi j^2.
inline FaberKrahnCheck faber_krahn_lhs(double area, double energy, double k, double j2 = j01_squared()) {
  if (!(area > 0 && energy > 0 && k > 0)) throw Error(ErrorCode::InvalidArgument, "area, energy and k must be positive");
  FaberKrahnCheck c;
  c.value = area * energy / k;
  c.constant = faber_krahn_constant(j2);
  c.satisfied = c.value >= c.constant;
  return c;
}

/// Right end of the admissible interval: (j^2/4)(1-eps) > 1.
inline double interval_end(double j2 = j01_squared()) { return 1.0 - 4.0 / j2; }

/// Critical alpha making (j^2/4)(1-eps)(1 - alpha t^2/(pi j^2)) equal to 1.
/// Accepts the closed right end of the interval, where it vanishes.
inline double alpha_threshold(double eps, double t, double j2 = j01_squared()) {
  if (!(eps > 0 && eps <= interval_end(j2))) throw Error(ErrorCode::EpsOutOfRange, "eps=" + std::to_string(eps));
  if (!(t > 0)) throw Error(ErrorCode::InvalidArgument, "t must be positive");
  return (1.0 - 4.0 / (j2 * (1.0 - eps))) * std::numbers::pi * j2 / (t * t);
}

inline void require_admissible(double eps, double j2) {
  if (!(eps > 0 && eps < interval_end(j2)))
    throw Error(ErrorCode::EpsOutOfRange, "eps=" + std::to_string(eps) + " outside (0, " + std::to_string(interval_end(j2)) + ")");
}

/// c0(eps) = eps^2 2^-6 pi^3 j^2 (1 - 4/(j^2 (1-eps))).
inline double c0_of_eps(double eps, double j2 = j01_squared()) {
  require_admissible(eps, j2);
  using std::numbers::pi;
  return eps * eps / 64.0 * pi * pi * pi * j2 * (1.0 - 4.0 / (j2 * (1.0 - eps)));
}

/// Second route to c0(eps): solve the defining equation with t = t(eps).
inline double c0_from_threshold(double eps, double j2 = j01_squared()) {
  require_admissible(eps, j2);
  return alpha_threshold(eps, analytic_t_of_eps(eps), j2);
}

/// c0 under the corrected counting bound, where t(eps) = 8/eps.
inline double c0_corrected_of_eps(double eps, double j2 = j01_squared()) {
  require_admissible(eps, j2);
  return alpha_threshold(eps, corrected_t_of_eps(eps), j2);
}

inline double eps_max(double j2 = j01_squared()) { return (1.0 - 1.0 / j2) - std::sqrt(1.0 + 2.0 * j2) / j2; }

inline double c0_closed_form(double j2 = j01_squared()) {
  using std::numbers::pi;
  return pi * pi * pi / (64.0 * j2) * ((j2 * j2 + 10.0 * j2 - 2.0) - 2.0 * (2.0 * j2 + 1.0) * std::sqrt(1.0 + 2.0 * j2));
}

/// Golden-section maximisation of a unimodal f on (a, b).
template <class F>
double golden_section_argmax(F&& f, double a, double b, double tol = 1e-12) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

inline double eps_max_golden(double j2 = j01_squared()) {
  const double end = interval_end(j2);
  return golden_section_argmax([&](double e) { return c0_of_eps(e, j2); }, end * 1e-9, end * (1.0 - 1e-9));
}

/// A quoted low-precision figure compared with its computed value at a
/// tolerance of one unit in the last quoted digit.
struct QuotedCheck {
  std::string name;
  double quoted = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool agrees = false;
};

inline QuotedCheck quoted_check(std::string name, double quoted, double computed, double unit) {
  return {std::move(name), quoted, computed, unit, std::abs(quoted - computed) <= unit * (1.0 + 1e-12)};
}

struct ConstantLedger {
  double j = 0.0;
  double j2 = 0.0;
  double faber_krahn = 0.0;
  double interval_end = 0.0;
  double eps_max = 0.0;
  double eps_max_golden = 0.0;
  double c0_of_eps_max = 0.0;
  double c0_closed_form = 0.0;
  double c0_from_threshold = 0.0;
  double t_of_eps_max = 0.0;
  double c0_corrected = 0.0;
  double t_corrected_of_eps_max = 0.0;
  double bound_margin = 0.0;  // (j^2/4)(1-eps_max) - 1
  std::vector<QuotedCheck> quoted;

  nlohmann::json to_json() const {
    nlohmann::json out;
    out["j"] = j;
    out["j_squared"] = j2;
    out["pi_j_squared"] = faber_krahn;
    out["interval_end"] = interval_end;
    out["eps_max"] = eps_max;
    out["eps_max_golden_section"] = eps_max_golden;
    out["c0_of_eps_max"] = c0_of_eps_max;
    out["c0_closed_form"] = c0_closed_form;
    out["c0_from_threshold_equation"] = c0_from_threshold;
    out["t_of_eps_max"] = t_of_eps_max;
    out["c0_corrected_bound"] = c0_corrected;
    out["t_corrected_of_eps_max"] = t_corrected_of_eps_max;
    out["contradiction_margin_at_eps_max"] = bound_margin;
    out["provenance"] = {
        {"j", "first positive zero of J0; bisection on the power series"},
        {"eps_max", "closed-form maximiser of c0(eps); cross-checked by golden-section search"},
        {"c0_closed_form", "closed form of sup c0(eps); equals c0(eps_max)"},
        {"c0_from_threshold_equation", "alpha solving the threshold equation at t = 8/(eps pi)"},
        {"c0_corrected_bound", "same derivation with counting bound t^2/(4pi) - 2t/pi + 1, t(eps) = 8/eps"},
    };
    auto& q = out["quoted_values"] = nlohmann::json::array();
    for (const auto& c : quoted) {
      q.push_back({{"name", c.name},
                   {"quoted", c.quoted},
                   {"computed", c.computed},
                   {"tolerance", c.tolerance},
                   {"agrees", c.agrees},
                   {"note", c.agrees ? "consistent with the quoted digits" : "discrepancy: computed value differs beyond the quoted precision"}});
    }
    return out;
  }
};

inline ConstantLedger build_ledger() {
  ConstantLedger L;
  L.j = bessel_j01();
  L.j2 = L.j * L.j;
  L.faber_krahn = faber_krahn_constant(L.j2);
  L.interval_end = interval_end(L.j2);
  L.eps_max = eps_max(L.j2);
  L.eps_max_golden = eps_max_golden(L.j2);
  L.c0_of_eps_max = c0_of_eps(L.eps_max, L.j2);
  L.c0_closed_form = c0_closed_form(L.j2);
  L.c0_from_threshold = c0_from_threshold(L.eps_max, L.j2);
  L.t_of_eps_max = analytic_t_of_eps(L.eps_max);
  L.c0_corrected = c0_corrected_of_eps(L.eps_max, L.j2);
  L.t_corrected_of_eps_max = corrected_t_of_eps(L.eps_max);
  L.bound_margin = L.j2 / 4.0 * (1.0 - L.eps_max) - 1.0;
  L.quoted.push_back(quoted_check("j", 2.405, L.j, 0.001));
  L.quoted.push_back(quoted_check("interval_end", 0.36, L.interval_end, 0.01));
  L.quoted.push_back(quoted_check("c0", 0.014, L.c0_closed_form, 0.001));
  return L;
}

}  // namespace minpart
