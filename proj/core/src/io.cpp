#include "tvfem/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tvfem {

namespace {

std::string fmt(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void export_vtk(const Triangulation& mesh, const std::vector<NamedField>& fields,
                const std::string& path)
{
  std::ofstream out(path);
  if (!out) throw Error("export_vtk: cannot open '" + path + "'");
  out << "# vtk DataFile Version 3.0\n";
  out << "tvfem output\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const Vec& v : mesh.vertices) out << fmt(v[0]) << " " << fmt(v[1]) << " " << fmt(v[2]) << "\n";
  const int d = mesh.dim;
  out << "CELLS " << mesh.n_elements() << " " << mesh.n_elements() * (d + 2) << "\n";
  for (const auto& el : mesh.elements) {
    out << (d + 1);
    for (int i = 0; i <= d; ++i) out << " " << el[i];
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.n_elements() << "\n";
  for (int e = 0; e < mesh.n_elements(); ++e) out << (d == 2 ? 5 : 10) << "\n";

  bool cell_header = false;
  auto need_cell_data = [&]() {
    if (!cell_header) out << "CELL_DATA " << mesh.n_elements() << "\n";
    cell_header = true;
  };

  std::vector<const CrFunction*> point_fields;
  std::vector<std::string> point_names;
  for (const NamedField& nf : fields) {
    if (const auto* p0 = std::get_if<const P0Function*>(&nf.field)) {
      need_cell_data();
      out << "SCALARS " << nf.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : (*p0)->values) out << fmt(v) << "\n";
    } else if (const auto* cr = std::get_if<const CrFunction*>(&nf.field)) {
      need_cell_data();
      out << "SCALARS " << nf.name << " double 1\nLOOKUP_TABLE default\n";
      const P0Function mean = p0_project(**cr);
      for (double v : mean.values) out << fmt(v) << "\n";
      point_fields.push_back(*cr);
      point_names.push_back(nf.name);
    } else if (const auto* rt = std::get_if<const RtField*>(&nf.field)) {
      need_cell_data();
      out << "VECTORS " << nf.name << " double\n";
      const P0Vector mean = p0_project(**rt);
      for (const Vec& v : mean.values)
        out << fmt(v[0]) << " " << fmt(v[1]) << " " << fmt(v[2]) << "\n";
    }
  }

  if (!point_fields.empty()) {
    out << "POINT_DATA " << mesh.n_vertices() << "\n";
    for (std::size_t f = 0; f < point_fields.size(); ++f) {
      out << "SCALARS " << point_names[f] << "_pt double 1\nLOOKUP_TABLE default\n";
      std::vector<double> acc(mesh.n_vertices(), 0.0);
      std::vector<int> cnt(mesh.n_vertices(), 0);
      for (int e = 0; e < mesh.n_elements(); ++e)
        for (int i = 0; i <= d; ++i) {
          const int v = mesh.elements[e][i];
          acc[v] += cr_value(*point_fields[f], e, mesh.vertices[v]);
          cnt[v]++;
        }
      for (int v = 0; v < mesh.n_vertices(); ++v) out << fmt(acc[v] / std::max(1, cnt[v])) << "\n";
    }
  }
  if (!out) throw Error("export_vtk: write failure on '" + path + "'");
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, int dim,
                           const std::string& path)
{
  std::ofstream out(path);
  if (!out) throw Error("write_convergence_csv: cannot open '" + path + "'");
  out << "level,n_vertices,h,eta,rho_tilde,linf_zbar,flow_steps,wall_time,rate\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ConvergenceRow& r = rows[i];
    out << r.level << "," << r.n_vertices << "," << fmt(r.h) << "," << fmt(r.eta) << ","
        << fmt(r.rho_tilde) << "," << fmt(r.linf_zbar) << "," << r.flow_steps << ","
        << fmt(r.wall_time) << ",";
    if (i > 0 && rows[i - 1].eta > 0.0 && r.eta > 0.0 && r.n_vertices > rows[i - 1].n_vertices) {
      const double rate = dim * std::log(rows[i - 1].eta / r.eta) /
                          std::log(static_cast<double>(r.n_vertices) / rows[i - 1].n_vertices);
      out << fmt(rate);
    }
    out << "\n";
  }
  if (!out) throw Error("write_convergence_csv: write failure on '" + path + "'");
}

std::vector<ConvergenceRow> read_convergence_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw Error("read_convergence_csv: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error("read_convergence_csv: empty file");
  std::vector<ConvergenceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    if (cols.size() < 8) throw Error("read_convergence_csv: malformed row '" + line + "'");
    ConvergenceRow r;
    r.level = std::stoi(cols[0]);
    r.n_vertices = std::stoi(cols[1]);
    r.h = std::stod(cols[2]);
    r.eta = std::stod(cols[3]);
    r.rho_tilde = std::stod(cols[4]);
    r.linf_zbar = std::stod(cols[5]);
    r.flow_steps = std::stoi(cols[6]);
    r.wall_time = std::stod(cols[7]);
    rows.push_back(r);
  }
  return rows;
}

double fit_rate(const std::vector<ConvergenceRow>& rows, int dim, int last_levels)
{
  std::vector<std::pair<double, double>> pts;  // (log N, log eta)
  for (const ConvergenceRow& r : rows)
    if (r.eta > 0.0 && r.n_vertices > 0) pts.emplace_back(std::log(r.n_vertices), std::log(r.eta));
  if (static_cast<int>(pts.size()) > last_levels)
    pts.erase(pts.begin(), pts.end() - last_levels);
  if (pts.size() < 2) throw Error("fit_rate: need at least two usable rows");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -dim * slope;  // eta ~ N^{-rate/d}
}

}  // namespace tvfem
