#pragma once

#include "localgp/types.hpp"

#include <functional>

namespace localgp {

struct LineResult {
  double s_star = 0.0;
  double f_star = 0.0;
  int evals = 0;
};

// The objective returned a NaN or infinity at `s()`.
class NonFiniteObjective : public NumericalError {
 public:
  NonFiniteObjective(const std::string& what, double s) : NumericalError(what), s_(s) {}
  double s() const { return s_; }

 private:
  double s_;
};

inline constexpr int kBrentMaxEvals = 100;

// Brent's golden-section / parabolic-interpolation minimizer on [a, b], after
// the netlib `fmin` routine. Only evaluates f inside [a, b]. Converges to a
// local minimizer within sqrt(eps)*|s| + tol/3 and never exceeds
// kBrentMaxEvals evaluations.
LineResult brent_min(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace localgp
