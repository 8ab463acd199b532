#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "tvfem/afem.hpp"
#include "tvfem/image.hpp"
#include "tvfem/io.hpp"

namespace {

using namespace tvfem;

std::vector<ConvergenceRow> to_rows(const std::vector<AfemLevel>& levels)
{
  std::vector<ConvergenceRow> rows;
  for (const AfemLevel& lv : levels) {
    ConvergenceRow r;
    r.level = lv.level;
    r.n_vertices = lv.n_vertices;
    r.h = lv.h;
    r.eta = std::sqrt(std::max(0.0, lv.eta_sq));
    r.rho_tilde = lv.rho_tilde_sq >= 0 ? std::sqrt(lv.rho_tilde_sq) : -1.0;
    r.linf_zbar = lv.linf_zbar;
    r.flow_steps = lv.flow_steps;
    r.wall_time = lv.wall_time;
    rows.push_back(r);
  }
  return rows;
}

void dump_levels(const std::vector<AfemLevel>& levels, int dim, const std::string& out_dir,
                 bool vtk_per_level)
{
  std::filesystem::create_directories(out_dir);
  write_convergence_csv(to_rows(levels), dim, out_dir + "/convergence.csv");
  for (const AfemLevel& lv : levels) {
    if (!vtk_per_level && lv.level + 1 != static_cast<int>(levels.size())) continue;
    const P0Function pu = p0_project(lv.u_bar);
    const P0Vector pz = p0_project(lv.z_bar);
    P0Function zmod(*lv.mesh);
    for (int e = 0; e < lv.mesh->n_elements(); ++e) zmod.values[e] = norm(pz.values[e]);
    char name[64];
    std::snprintf(name, sizeof(name), "/level_%02d.vtk", lv.level);
    export_vtk(*lv.mesh, {{"u", &lv.u_bar}, {"pi_u", &pu}, {"z_mod", &zmod}, {"z", &lv.z_bar}},
               out_dir + name);
  }
}

void print_rows(const std::vector<ConvergenceRow>& rows)
{
  std::printf("level  vertices        h          eta    rho_tilde  linf(z)  steps   time\n");
  for (const ConvergenceRow& r : rows)
    std::printf("%5d %9d %10.4e %12.6e %10.4e %8.5f %6d %6.2f\n", r.level, r.n_vertices, r.h,
                r.eta, r.rho_tilde, r.linf_zbar, r.flow_steps, r.wall_time);
}

int run_benchmark(const std::string& name, int levels, double theta, const std::string& eps,
                  bool uniform, int subdivisions, const std::string& out_dir, bool vtk_per_level,
                  bool warm)
{
  BenchmarkCase bc = benchmark(name);
  if (subdivisions > 0) bc.subdivisions = subdivisions;
  AfemConfig cfg;
  cfg.max_levels = levels;
  cfg.theta = uniform ? 1.0 : theta;
  cfg.eps_strategy = eps == "local" ? EpsStrategy::local : EpsStrategy::global;
  cfg.flow.warm_start = warm;
  const std::vector<AfemLevel> run = afem_run(bc, cfg);
  dump_levels(run, bc.dim, out_dir, vtk_per_level);

  const std::vector<ConvergenceRow> rows = to_rows(run);
  print_rows(rows);
  if (rows.size() >= 2) {
    const int window = std::min<int>(5, static_cast<int>(rows.size()));
    std::printf("fitted rate (last %d levels): %.3f\n", window, fit_rate(rows, bc.dim, window));
  }
  std::cout << "wrote " << out_dir << "/convergence.csv\n";
  return 0;
}

int denoise_image(const std::string& pgm, double alpha, int levels, int subdivisions,
                  const std::string& out_dir)
{
  auto img = std::make_shared<ImageData>(load_pgm(pgm));
  const BenchmarkCase bc = image_benchmark(img, alpha, subdivisions);
  AfemConfig cfg;
  cfg.max_levels = levels;
  const std::vector<AfemLevel> run = afem_run(bc, cfg);
  dump_levels(run, 2, out_dir, false);

  const AfemLevel& last = run.back();
  write_pgm(sample_to_image(last.u, img->width, img->height), out_dir + "/denoised.pgm");
  const double err = image_l2_error_sq(*img, last.u);
  std::printf("levels: %zu, vertices: %d, ||u-g||^2 = %.6e\n", run.size(), last.n_vertices, err);
  std::cout << "wrote " << out_dir << "/denoised.pgm\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Adaptive total-variation denoising with CR/RT finite elements"};
  app.set_config("--config");
  app.require_subcommand(1);

  auto* rb = app.add_subcommand("run-benchmark", "run an AFEM benchmark and write CSV/VTK");
  std::string name = "one_disk_2d";
  int levels = 10;
  double theta = 0.5;
  std::string eps = "global";
  bool uniform = false;
  bool vtk_all = false;
  bool warm = false;
  int subdivisions = 0;
  std::string out_dir = "out";
  rb->add_option("--name", name, "one_disk_2d|one_disk_3d|two_disks|cone|square|image");
  rb->add_option("--levels", levels, "number of AFEM levels");
  rb->add_option("--theta", theta, "Doerfler parameter");
  rb->add_option("--eps", eps, "regularization strategy: local|global")
      ->check(CLI::IsMember({"local", "global"}));
  rb->add_flag("--uniform", uniform, "uniform refinement (theta = 1)");
  rb->add_flag("--vtk-per-level", vtk_all, "write VTK for every level, not only the last");
  rb->add_flag("--warm", warm, "warm-start the flow from the previous level");
  rb->add_option("--subdivisions", subdivisions, "override the initial grid");
  rb->add_option("--out", out_dir, "output directory");

  auto* di = app.add_subcommand("denoise-image", "denoise/coarsen a PGM image");
  std::string pgm;
  double alpha = 1e4;
  int img_levels = 20;
  int img_subdiv = 16;
  std::string img_out = "out";
  di->add_option("--pgm", pgm, "input PGM (P2 or P5)")->required();
  di->add_option("--alpha", alpha, "fidelity parameter");
  di->add_option("--levels", img_levels, "number of AFEM levels");
  di->add_option("--subdivisions", img_subdiv, "initial grid");
  di->add_option("--out", img_out, "output directory");

  auto* ra = app.add_subcommand("rates", "fit the experimental convergence rate of a CSV");
  std::string csv;
  int last = 5;
  int dim = 2;
  ra->add_option("csv", csv, "convergence.csv produced by run-benchmark")->required();
  ra->add_option("--last", last, "number of trailing levels to fit");
  ra->add_option("--dim", dim, "spatial dimension");

  auto* ex = app.add_subcommand("export", "mesh/field dumps and the synthetic test image");
  std::string ex_name = "one_disk_2d";
  int ex_subdiv = 0;
  std::string ex_out = "mesh.vtk";
  std::string synth;
  int synth_size = 256;
  ex->add_option("--name", ex_name, "benchmark whose initial mesh/data to dump");
  ex->add_option("--subdivisions", ex_subdiv, "override the initial grid");
  ex->add_option("--out", ex_out, "output VTK path");
  ex->add_option("--synthetic-image", synth, "write the synthetic test image to this PGM path");
  ex->add_option("--size", synth_size, "synthetic image size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (rb->parsed())
      return run_benchmark(name, levels, theta, eps, uniform, subdivisions, out_dir, vtk_all,
                           warm);
    if (di->parsed()) return denoise_image(pgm, alpha, img_levels, img_subdiv, img_out);
    if (ra->parsed()) {
      const double rate = fit_rate(read_convergence_csv(csv), dim, last);
      std::printf("rate: %.6f\n", rate);
      return 0;
    }
    if (ex->parsed()) {
      if (!synth.empty()) {
        write_pgm(make_synthetic_image(synth_size), synth);
        std::cout << "wrote " << synth << "\n";
        return 0;
      }
      BenchmarkCase bc = benchmark(ex_name);
      if (ex_subdiv > 0) bc.subdivisions = ex_subdiv;
      const Triangulation mesh = bc.initial_mesh();
      const P0Function gh = p0_project(mesh, bc.g, 3);
      export_vtk(mesh, {{"g", &gh}}, ex_out);
      std::cout << "wrote " << ex_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
