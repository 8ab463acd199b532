#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "tvfem/image.hpp"
#include "tvfem/io.hpp"

using namespace tvfem;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir()
  {
    path = std::filesystem::temp_directory_path() / "tvfem_test";
    std::filesystem::create_directories(path);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("pgm: ascii and binary parse to the same normalized pixels")
{
  TempDir tmp;
  {
    std::ofstream p2(tmp.file("a.pgm"));
    p2 << "P2\n# comment\n2 2\n255\n0 255\n255 0\n";
  }
  const ImageData a = load_pgm(tmp.file("a.pgm"));
  CHECK(a.width == 2);
  CHECK(a.height == 2);
  CHECK(a.pixels == std::vector<double>{0.0, 1.0, 1.0, 0.0});

  {
    std::ofstream p5(tmp.file("b.pgm"), std::ios::binary);
    p5 << "P5\n2 2\n255\n";
    const unsigned char raw[4] = {0, 255, 255, 0};
    p5.write(reinterpret_cast<const char*>(raw), 4);
  }
  const ImageData b = load_pgm(tmp.file("b.pgm"));
  CHECK(b.pixels == a.pixels);
}

TEST_CASE("pgm: 16-bit samples are big-endian and normalized")
{
  TempDir tmp;
  {
    std::ofstream p5(tmp.file("c.pgm"), std::ios::binary);
    p5 << "P5\n2 1\n65535\n";
    const unsigned char raw[4] = {0xff, 0xff, 0x00, 0x00};
    p5.write(reinterpret_cast<const char*>(raw), 4);
  }
  const ImageData c = load_pgm(tmp.file("c.pgm"));
  CHECK(c.pixels[0] == doctest::Approx(1.0));
  CHECK(c.pixels[1] == doctest::Approx(0.0));
}

TEST_CASE("pgm: truncated payload reports expected and actual byte counts")
{
  TempDir tmp;
  {
    std::ofstream p5(tmp.file("d.pgm"), std::ios::binary);
    p5 << "P5\n4 4\n255\n";
    const unsigned char raw[3] = {1, 2, 3};
    p5.write(reinterpret_cast<const char*>(raw), 3);
  }
  try {
    load_pgm(tmp.file("d.pgm"));
    CHECK(false);
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("expected 16") != std::string::npos);
    CHECK(what.find("got 3") != std::string::npos);
    CHECK(what.find("byte") != std::string::npos);
  }
}

TEST_CASE("pgm: malformed headers throw with a byte offset")
{
  TempDir tmp;
  {
    std::ofstream f(tmp.file("e.pgm"));
    f << "P6\n2 2\n255\n";
  }
  CHECK_THROWS_AS(load_pgm(tmp.file("e.pgm")), Error);
  {
    std::ofstream f(tmp.file("f.pgm"));
    f << "P2\n2 x\n255\n0 0 0 0\n";
  }
  CHECK_THROWS_AS(load_pgm(tmp.file("f.pgm")), Error);
  CHECK_THROWS_AS(load_pgm(tmp.file("missing.pgm")), Error);
}

TEST_CASE("pgm round trip is bit exact at maxval 255")
{
  TempDir tmp;
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> level(0, 255);
  ImageData img;
  img.width = 17;
  img.height = 9;
  img.pixels.resize(17 * 9);
  for (double& p : img.pixels) p = level(rng) / 255.0;
  write_pgm(img, tmp.file("rt.pgm"));
  const ImageData back = load_pgm(tmp.file("rt.pgm"));
  REQUIRE(back.width == img.width);
  REQUIRE(back.height == img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    CHECK(back.pixels[i] == img.pixels[i]);

  // writing the reloaded image reproduces the same file bytes
  write_pgm(back, tmp.file("rt2.pgm"));
  std::ifstream f1(tmp.file("rt.pgm"), std::ios::binary);
  std::ifstream f2(tmp.file("rt2.pgm"), std::ios::binary);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
}

TEST_CASE("synthetic image is piecewise constant in [0,1]")
{
  const ImageData img = make_synthetic_image(64);
  CHECK(img.width == 64);
  std::set<double> values(img.pixels.begin(), img.pixels.end());
  CHECK(values.size() <= 8);
  for (double v : img.pixels) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("image_to_problem: constant and checkerboard data")
{
  ImageData flat;
  flat.width = flat.height = 4;
  flat.pixels.assign(16, 0.6);
  const Triangulation m = uniform_triangulation(2, {vec(0, 0), vec(1, 1)}, 4,
                                                [](const Vec&) { return false; });
  const RofProblem p = image_to_problem(flat, 1e4, m, 0.01);
  CHECK(p.alpha == 1e4);
  CHECK_FALSE(p.dirichlet);
  for (double v : p.g_h.values) CHECK(v == doctest::Approx(0.6));

  ImageData checker;
  checker.width = checker.height = 2;
  checker.pixels = {1.0, 0.0, 0.0, 1.0};
  const Triangulation m2 = uniform_triangulation(2, {vec(0, 0), vec(1, 1)}, 2,
                                                 [](const Vec&) { return false; });
  const RofProblem p2 = image_to_problem(checker, 1e4, m2, 0.01);
  for (int e = 0; e < m2.n_elements(); ++e) {
    const Vec c = m2.centroid[e];
    const double want = checker.sample_nearest(c);
    CHECK(p2.g_h.values[e] == doctest::Approx(want));
  }
}

TEST_CASE("vtk export: counts, P0 round trip, CR and RT blocks")
{
  TempDir tmp;
  const Triangulation m = uniform_triangulation(2, {vec(-1, -1), vec(1, 1)}, 4);
  P0Function cell(m);
  for (int e = 0; e < m.n_elements(); ++e) cell.values[e] = 0.25 * e;
  CrFunction cr(m, 1.0);
  RtField rt(m);
  export_vtk(m, {{"cell", &cell}, {"u", &cr}, {"flux", &rt}}, tmp.file("out.vtk"));

  std::ifstream in(tmp.file("out.vtk"));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find("POINTS 25 double") != std::string::npos);
  CHECK(text.find("CELLS 32 128") != std::string::npos);
  CHECK(text.find("CELL_TYPES 32") != std::string::npos);
  CHECK(text.find("SCALARS cell double 1") != std::string::npos);
  CHECK(text.find("VECTORS flux double") != std::string::npos);
  CHECK(text.find("POINT_DATA 25") != std::string::npos);

  // P0 values round trip at full precision
  std::istringstream ss(text.substr(text.find("LOOKUP_TABLE default") + 21));
  for (int e = 0; e < m.n_elements(); ++e) {
    double v;
    ss >> v;
    CHECK(v == cell.values[e]);
  }

  // geometry-only file parses too
  export_vtk(m, {}, tmp.file("geo.vtk"));
  std::ifstream gin(tmp.file("geo.vtk"));
  std::string geo((std::istreambuf_iterator<char>(gin)), std::istreambuf_iterator<char>());
  CHECK(geo.find("UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(geo.find("CELL_DATA") == std::string::npos);
}

TEST_CASE("convergence csv: header, rate column, round trip")
{
  TempDir tmp;
  std::vector<ConvergenceRow> rows;
  // eta halving as N quadruples: rate 1 in 2D
  for (int i = 0; i < 4; ++i) {
    ConvergenceRow r;
    r.level = i;
    r.n_vertices = 25 << (2 * i);
    r.h = 0.5 / (1 << i);
    r.eta = 1.0 / (1 << i);
    r.rho_tilde = 0.5 * r.eta;
    r.linf_zbar = 1.0;
    r.flow_steps = 10 + i;
    r.wall_time = 0.125 * i;
    rows.push_back(r);
  }
  write_convergence_csv(rows, 2, tmp.file("conv.csv"));

  std::ifstream in(tmp.file("conv.csv"));
  std::string header;
  std::getline(in, header);
  CHECK(header == "level,n_vertices,h,eta,rho_tilde,linf_zbar,flow_steps,wall_time,rate");

  const std::vector<ConvergenceRow> back = read_convergence_csv(tmp.file("conv.csv"));
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].level == rows[i].level);
    CHECK(back[i].n_vertices == rows[i].n_vertices);
    CHECK(back[i].h == rows[i].h);
    CHECK(back[i].eta == rows[i].eta);
    CHECK(back[i].rho_tilde == rows[i].rho_tilde);
    CHECK(back[i].wall_time == rows[i].wall_time);
  }
  CHECK(fit_rate(back, 2, 4) == doctest::Approx(1.0).epsilon(1e-12));

  // header-only file for the empty list
  write_convergence_csv({}, 2, tmp.file("empty.csv"));
  CHECK(read_convergence_csv(tmp.file("empty.csv")).empty());
}
