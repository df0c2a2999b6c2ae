#include "gupdirac/hypergeometric.hpp"

#include <cmath>

#include <fmt/format.h>

#include "gupdirac/errors.hpp"

namespace gupdirac {

namespace {

void check_pole(int n, double c) {
  for (int k = 0; k < n; ++k) {
    if (c + k == 0.0) {
      throw DomainError(fmt::format("2F1(-{}, b; {}; z): pole at k = {} (c + k = 0)", n, c, k));
    }
  }
}

} // namespace

double hyp2f1_terminating(int n, double b, double c, double z) {
  if (n < 0) {
    throw DomainError(fmt::format("terminating 2F1 needs n >= 0, got {}", n));
  }
  if (!(z >= 0.0 && z < 1.0)) {
    throw DomainError(fmt::format("terminating 2F1 argument must lie in [0, 1), got {}", z));
  }
  check_pole(n, c);

  double term = 1.0;
  double sum = 1.0;
  double comp = 0.0;
  for (int k = 0; k < n; ++k) {
    term *= (k - n) * (b + k) / ((c + k) * (k + 1.0)) * z;
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

double hyp2f1_terminating_derivative(int n, double b, double c, double z) {
  if (n == 0) {
    return 0.0;
  }
  check_pole(n, c);
  return (-n * b / c) * hyp2f1_terminating(n - 1, b + 1.0, c + 1.0, z);
}

} // namespace gupdirac
