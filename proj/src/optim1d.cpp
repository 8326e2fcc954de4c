#include "localgp/optim1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace localgp {

LineResult brent_min(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(a < b)) throw std::invalid_argument("brent_min: need a < b");
  if (!(tol > 0.0)) throw std::invalid_argument("brent_min: need tol > 0");

  const double lo = a;
  const double hi = b;
  int evals = 0;
  auto eval = [&](double s) {
    s = std::clamp(s, lo, hi);
    const double value = f(s);
    ++evals;
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << "brent_min: objective is not finite at s=" << s;
      throw NonFiniteObjective(msg.str(), s);
    }
    return value;
  };

  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  const double eps = std::sqrt(std::numeric_limits<double>::epsilon());
  const double tol3 = tol / 3.0;

  double v = a + golden * (b - a);
  double w = v;
  double x = v;
  double d = 0.0;
  double e = 0.0;
  double fx = eval(x);
  double fv = fx;
  double fw = fx;
  double tol1 = eps * std::fabs(x) + tol3;

  while (evals < kBrentMaxEvals) {
    const double xm = 0.5 * (a + b);
    tol1 = eps * std::fabs(x) + tol3;
    const double t2 = 2.0 * tol1;
    if (std::fabs(x - xm) <= t2 - 0.5 * (b - a)) break;

    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
    if (std::fabs(e) > tol1) {
      r = (x - w) * (fx - fv);
      q = (x - v) * (fx - fw);
      p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) {
        p = -p;
      } else {
        q = -q;
      }
      r = e;
      e = d;
    }

    double u;
    if (std::fabs(p) >= std::fabs(0.5 * q * r) || p <= q * (a - x) || p >= q * (b - x)) {
      e = (x < xm) ? b - x : a - x;
      d = golden * e;
    } else {
      d = p / q;
      u = x + d;
      if (u - a < t2 || b - u < t2) d = (x < xm) ? tol1 : -tol1;
    }

    if (std::fabs(d) >= tol1) {
      u = x + d;
    } else {
      u = x + (d > 0.0 ? tol1 : -tol1);
    }
    const double fu = eval(u);

    if (fu <= fx) {
      if (u < x) {
        b = x;
      } else {
        a = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }

  // The iteration never samples the interval ends; settle boundary optima.
  for (double end : {lo, hi}) {
    if (std::fabs(x - end) <= 4.0 * tol1 && evals < kBrentMaxEvals) {
      const double fe = eval(end);
      if (fe <= fx) {
        x = end;
        fx = fe;
      }
    }
  }

  return {x, fx, evals};
}

}  // namespace localgp
