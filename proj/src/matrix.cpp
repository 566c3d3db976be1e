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

#include "mapf/matrix.hpp"

#include "mapf/errors.hpp"
#include "mapf/parallel.hpp"

namespace mapf {

void matmul_nt(const Matrix& A, const Matrix& B, Matrix& out, int jobs)
{
  if (A.cols != B.cols)
    throw InvalidInput("matmul_nt shape mismatch");
  out = Matrix(A.rows, B.rows);
  const int k = A.cols;
  parallel_for(A.rows, jobs, [&](std::int64_t i) {
    const double* arow = &A.a[static_cast<std::size_t>(i) * k];
    double* orow = &out.a[static_cast<std::size_t>(i) * out.cols];
    for (int j = 0; j < B.rows; ++j) {
      const double* brow = &B.a[static_cast<std::size_t>(j) * k];
      double sum = 0.0;
      for (int c = 0; c < k; ++c)
        sum += arow[c] * brow[c];
      orow[j] = sum;
    }
  });
}

void matmul_tn(const Matrix& A, const Matrix& B, Matrix& out, int jobs)
{
  if (A.rows != B.rows)
    throw InvalidInput("matmul_tn shape mismatch");
  out = Matrix(A.cols, B.cols);
  const int k = A.rows;
  parallel_for(A.cols, jobs, [&](std::int64_t i) {
    double* orow = &out.a[static_cast<std::size_t>(i) * out.cols];
    for (int j = 0; j < B.cols; ++j) {
      double sum = 0.0;
      for (int r = 0; r < k; ++r)
        sum += A.at(r, static_cast<int>(i)) * B.at(r, j);
      orow[j] = sum;
    }
  });
}

void matmul_nn(const Matrix& A, const Matrix& B, Matrix& out, int jobs)
{
  if (A.cols != B.rows)
    throw InvalidInput("matmul_nn shape mismatch");
  out = Matrix(A.rows, B.cols);
  const int k = A.cols;
  parallel_for(A.rows, jobs, [&](std::int64_t i) {
    const double* arow = &A.a[static_cast<std::size_t>(i) * k];
    double* orow = &out.a[static_cast<std::size_t>(i) * out.cols];
    for (int j = 0; j < B.cols; ++j) {
      double sum = 0.0;
      for (int c = 0; c < k; ++c)
        sum += arow[c] * B.at(c, j);
      orow[j] = sum;
    }
  });
}

}  // namespace mapf
