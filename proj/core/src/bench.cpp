#include "tvfem/bench.hpp"

#include <cmath>

#include "tvfem/image.hpp"

namespace tvfem {

namespace {

BenchmarkCase one_disk(int dim)
{
  BenchmarkCase bc;
  bc.name = dim == 2 ? "one_disk_2d" : "one_disk_3d";
  bc.dim = dim;
  bc.domain = {vec(-1, -1, dim == 3 ? -1 : 0), vec(1, 1, dim == 3 ? 1 : 0)};
  bc.subdivisions = dim == 2 ? 4 : 3;
  bc.alpha = 10.0;
  bc.dirichlet = true;
  const double r = 0.5;
  const double alpha = bc.alpha;
  auto g = [r](const Vec& x) { return norm(x) < r ? 1.0 : 0.0; };
  bc.g = g;
  ExactSolution ex;
  const double height = 1.0 - dim / (alpha * r);
  ex.u = [g, height](const Vec& x) { return height * g(x); };
  // outside the disk the field scales like (r/|x|)^{d-1}: divergence free,
  // unit length on the interface, below one beyond it
  ex.z = [r, dim](const Vec& x) {
    const double n = norm(x);
    if (n < r) return (-1.0 / r) * x;
    return (-std::pow(r, dim - 1) / std::pow(n, dim)) * x;
  };
  ex.div_z = [r, dim](const Vec& x) { return norm(x) < r ? -dim / r : 0.0; };
  bc.exact = ex;
  return bc;
}

BenchmarkCase two_disks()
{
  BenchmarkCase bc;
  bc.name = "two_disks";
  bc.dim = 2;
  bc.domain = {vec(-1.5, -1.5), vec(1.5, 1.5)};
  bc.subdivisions = 4;
  bc.alpha = 10.0;
  bc.dirichlet = true;
  const double r = 0.5;
  auto g = [r](const Vec& x) {
    if (norm(x - vec(r, 0)) < r) return 1.0;
    if (norm(x + vec(r, 0)) < r) return -1.0;
    return 0.0;
  };
  bc.g = g;
  ExactSolution ex;
  const double height = 1.0 - 2.0 / (bc.alpha * r);
  ex.u = [g, height](const Vec& x) { return height * g(x); };
  // The two single-disk fields, glued along {x1 = 0}; the normal component is
  // continuous there, so the divergence carries no interface contribution.
  ex.z = [r](const Vec& x) {
    const double sgn = x[0] >= 0.0 ? 1.0 : -1.0;
    const Vec w = x - vec(sgn * r, 0);
    const double n = norm(w);
    if (n < r) return (-sgn / r) * w;
    return (-sgn * r / (n * n)) * w;
  };
  ex.div_z = [r](const Vec& x) {
    if (norm(x - vec(r, 0)) < r) return -2.0 / r;
    if (norm(x + vec(r, 0)) < r) return 2.0 / r;
    return 0.0;
  };
  bc.exact = ex;
  return bc;
}

BenchmarkCase cone()
{
  BenchmarkCase bc;
  bc.name = "cone";
  bc.dim = 2;
  bc.domain = {vec(-1.5, -1.5), vec(1.5, 1.5)};
  bc.subdivisions = 4;
  bc.alpha = 10.0;
  bc.dirichlet = true;
  const double t = 0.1;
  const double s = std::sqrt(3.0 * t);
  // outer radius: the larger root of p^2 - p + t = 0, where the cone profile
  // 1 - (p^2 + t)/p reaches zero, so the primal solution is Lipschitz
  const double r = 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * t));
  const double alpha = bc.alpha;

  ExactSolution ex;
  ex.u = [s, t, r](const Vec& x) {
    const double n = norm(x);
    if (n <= s) return 1.0 - (s * s + t) / s;
    if (n <= r) return 1.0 - (n * n + t) / n;
    return 0.0;
  };
  ex.z = [s, r](const Vec& x) {
    const double n = norm(x);
    if (n <= s) return (-1.0 / s) * x;
    if (n <= r) return (-1.0 / n) * x;
    return (-r / (n * n)) * x;
  };
  ex.div_z = [s, r](const Vec& x) {
    const double n = norm(x);
    if (n <= s) return -2.0 / s;
    if (n <= r) return -1.0 / n;
    return 0.0;
  };
  // data consistent with div z = alpha (u - g)
  auto u = ex.u;
  auto div_z = ex.div_z;
  bc.g = [u, div_z, alpha](const Vec& x) { return u(x) - div_z(x) / alpha; };
  bc.exact = ex;
  return bc;
}

BenchmarkCase square()
{
  BenchmarkCase bc;
  bc.name = "square";
  bc.dim = 2;
  bc.domain = {vec(-1, -1), vec(1, 1)};
  bc.subdivisions = 4;
  bc.alpha = 100.0;
  bc.dirichlet = false;
  const double r = 0.5;
  bc.g = [r](const Vec& x) {
    return std::abs(x[0]) <= r && std::abs(x[1]) <= r ? 1.0 : 0.0;
  };
  return bc;
}

}  // namespace

BenchmarkCase image_benchmark(std::shared_ptr<const ImageData> img, double alpha,
                              int subdivisions)
{
  BenchmarkCase bc;
  bc.name = "image";
  bc.dim = 2;
  bc.domain = {vec(0, 0), vec(1, 1)};
  bc.subdivisions = subdivisions;
  bc.alpha = alpha;
  bc.dirichlet = false;
  bc.g = [img](const Vec& x) { return img->sample_nearest(x); };
  return bc;
}

BenchmarkCase benchmark(const std::string& name)
{
  if (name == "one_disk_2d") return one_disk(2);
  if (name == "one_disk_3d") return one_disk(3);
  if (name == "two_disks") return two_disks();
  if (name == "cone") return cone();
  if (name == "square") return square();
  if (name == "image")
    return image_benchmark(std::make_shared<ImageData>(make_synthetic_image(256)), 1e4, 16);
  throw Error("benchmark: unknown name '" + name + "'");
}

}  // namespace tvfem
