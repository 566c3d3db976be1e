/*
 * Copyright (C) 2026 mapf-replan contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#ifndef MAPF__MATRIX_HPP
#define MAPF__MATRIX_HPP

#include <vector>

namespace mapf {

/// Dense row-major matrix of doubles.
struct Matrix
{
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

  bool operator==(const Matrix&) const = default;
};

/// out = A · Bᵀ, with A (m×k) and B (n×k). Threads split the independent
/// output rows; each output element is one serial dot product with a fixed
/// summation order, so the result is bit-identical for every jobs value.
void matmul_nt(const Matrix& A, const Matrix& B, Matrix& out, int jobs);

/// out = Aᵀ · B, with A (k×m) and B (k×n).
void matmul_tn(const Matrix& A, const Matrix& B, Matrix& out, int jobs);

/// out = A · B, with A (m×k) and B (k×n).
void matmul_nn(const Matrix& A, const Matrix& B, Matrix& out, int jobs);

}  // namespace mapf

#endif  // MAPF__MATRIX_HPP
