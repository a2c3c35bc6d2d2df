#pragma once

// Five-point central differences, O(h^4).

namespace dampath::fd {

template <class F>
auto first_derivative(const F& f, double x, double h) {
  return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
}

template <class F>
auto second_derivative(const F& f, double x, double h) {
  return (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) -
          f(x + 2.0 * h)) /
         (12.0 * h * h);
}

}  // namespace dampath::fd
