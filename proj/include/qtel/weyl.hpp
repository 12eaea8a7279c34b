// Copyright 2026 The qtel authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <numbers>

#include "qtel/qmath.hpp"

namespace qtel {

// Discrete displacement operators W(m,n) = X^m Z^n with
//   X|k> = |k+1 mod d>,   Z|k> = w^k |k>,   w = exp(2*pi*i/d).
// The d^2 of them form a nice unitary error basis; the same convention is
// used for the depolarizing Kraus set and the teleportation corrections.
inline ComplexMatrix weyl(int d, int m, int n) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  if (m < 0 || m >= d || n < 0 || n >= d)
    throw std::invalid_argument("Weyl indices must lie in [0, d)");
  ComplexMatrix w = ComplexMatrix::Zero(d, d);
  const double step = 2.0 * std::numbers::pi / d;
  for (int k = 0; k < d; ++k)
    w((k + m) % d, k) = Complex(std::cos(step * n * k), std::sin(step * n * k));
  return w;
}

}  // namespace qtel
