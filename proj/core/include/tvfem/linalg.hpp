#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace tvfem {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sparse matrix in compressed-row storage. Immutable after construction;
// concurrent products on a shared matrix are safe.
struct SparseMatrix {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<int> row_offsets;  // size n_rows+1, non-decreasing
  std::vector<int> col_indices;  // strictly increasing within each row
  std::vector<double> values;
};

struct Triplet {
  int row;
  int col;
  double value;
};

// Builds CSR from an unordered triplet list; duplicates are summed.
SparseMatrix csr_from_triplets(int n_rows, int n_cols, std::vector<Triplet> triplets);

std::vector<double> spmv(const SparseMatrix& A, std::span<const double> x);
void spmv_into(const SparseMatrix& A, std::span<const double> x, std::span<double> y);

enum class Preconditioner { none, jacobi };

struct CgConfig {
  double rel_tolerance = 1e-12;
  int max_iterations = 0;  // 0: use 10*n
  Preconditioner preconditioner = Preconditioner::jacobi;
};

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double residual = 0.0;  // ||A x - b||_2
};

struct CgFailure : Error {
  CgFailure(const std::string& what, int iterations, double residual)
      : Error(what), iterations(iterations), residual(residual)
  {
  }
  int iterations;
  double residual;
};

// Preconditioned conjugate gradients for SPD systems. Stops when
// ||A x - b|| <= rel_tolerance * ||b||; throws CgFailure otherwise.
// An optional initial guess warm-starts the iteration.
CgResult cg_solve(const SparseMatrix& A, std::span<const double> b, const CgConfig& cfg = {},
                  std::span<const double> x0 = {});

// Pattern-reuse assembly: the sparsity of a finite element matrix is fixed by
// the mesh, only values change between gradient-flow steps.
class CsrPattern {
public:
  // dof_tuples: one tuple of (distinct) dof indices per element block.
  CsrPattern(int n, const std::vector<std::vector<int>>& dof_tuples);

  // Slot of entry (i,j); entry must exist in the pattern.
  int slot(int i, int j) const;

  SparseMatrix& matrix() { return mat_; }
  const SparseMatrix& matrix() const { return mat_; }
  void zero_values();

private:
  SparseMatrix mat_;
};

}  // namespace tvfem
