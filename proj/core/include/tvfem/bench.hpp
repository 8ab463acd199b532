#pragma once

#include <memory>
#include <optional>
#include <string>

#include "tvfem/estimator.hpp"
#include "tvfem/rof.hpp"

namespace tvfem {

// Exact primal/dual pair of a benchmark problem, given as callbacks. The
// divergence of z is supplied analytically and is cross-validated against
// finite differences of z in the test suite.
struct ExactSolution {
  ScalarField u;
  VectorField z;
  ScalarField div_z;
};

struct BenchmarkCase {
  std::string name;
  int dim = 2;
  Box domain;
  int subdivisions = 4;  // initial uniform grid
  double alpha = 10.0;
  bool dirichlet = true;
  ScalarField g;
  std::optional<ExactSolution> exact;

  Triangulation initial_mesh() const
  {
    const bool dir = dirichlet;
    return uniform_triangulation(dim, domain, subdivisions, [dir](const Vec&) { return dir; });
  }
};

// Registry: one_disk_2d, one_disk_3d, two_disks, cone, square, image.
BenchmarkCase benchmark(const std::string& name);

struct ImageData;

// Denoising/coarsening problem for externally supplied image data.
BenchmarkCase image_benchmark(std::shared_ptr<const ImageData> img, double alpha,
                              int subdivisions);

}  // namespace tvfem
