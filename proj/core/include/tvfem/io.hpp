#pragma once

#include <string>
#include <variant>
#include <vector>

#include "tvfem/fem.hpp"

namespace tvfem {

struct NamedField {
  std::string name;
  std::variant<const CrFunction*, const P0Function*, const RtField*> field;
};

// Legacy ASCII VTK 3.0 unstructured grid. CR functions are written as
// cell-centered scalars plus vertex-averaged point data, RT fields as
// cell-centered vectors (their element means).
void export_vtk(const Triangulation& mesh, const std::vector<NamedField>& fields,
                const std::string& path);

struct ConvergenceRow {
  int level = 0;
  int n_vertices = 0;
  double h = 0.0;
  double eta = 0.0;
  double rho_tilde = -1.0;
  double linf_zbar = 0.0;
  int flow_steps = 0;
  double wall_time = 0.0;
};

// Header level,n_vertices,h,eta,rho_tilde,linf_zbar,flow_steps,wall_time,rate
// with 17 significant digits; the rate column is the experimental order
// d*log(eta_{i-1}/eta_i)/log(N_i/N_{i-1}) against the previous row.
void write_convergence_csv(const std::vector<ConvergenceRow>& rows, int dim,
                           const std::string& path);

std::vector<ConvergenceRow> read_convergence_csv(const std::string& path);

// Least-squares fit of log eta against log n_vertices over the last
// `last_levels` rows, reported as the rate in h ~ N^{-1/d}.
double fit_rate(const std::vector<ConvergenceRow>& rows, int dim, int last_levels);

}  // namespace tvfem
