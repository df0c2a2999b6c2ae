#pragma once

namespace gupdirac {

/// Terminating Gauss series 2F1(-n, b; c; z) = sum_{k=0}^{n} (-n)_k (b)_k / ((c)_k k!) z^k.
///
/// Terms are accumulated with Neumaier compensation. Throws DomainError when c + k = 0
/// for some k < n (the offending k is named) or when z lies outside [0, 1).
[[nodiscard]] double hyp2f1_terminating(int n, double b, double c, double z);

/// d/dz of the series above, via d/dz 2F1(-n, b; c; z) = (-n b / c) 2F1(-n+1, b+1; c+1; z).
[[nodiscard]] double hyp2f1_terminating_derivative(int n, double b, double c, double z);

} // namespace gupdirac
