#include "tvfem/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tvfem {

namespace {

struct PgmReader {
  std::ifstream in;
  long offset = 0;
  std::string path;

  explicit PgmReader(const std::string& p) : in(p, std::ios::binary), path(p)
  {
    if (!in) throw Error("load_pgm: cannot open '" + p + "'");
  }

  [[noreturn]] void fail(const std::string& what) const
  {
    throw Error("load_pgm: " + what + " at byte " + std::to_string(offset) + " of '" + path + "'");
  }

  int get()
  {
    const int c = in.get();
    if (c != EOF) ++offset;
    return c;
  }

  // next token, skipping whitespace and '#' comments
  std::string token()
  {
    std::string t;
    int c = get();
    while (c != EOF) {
      if (c == '#') {
        while (c != EOF && c != '\n') c = get();
      } else if (!std::isspace(c)) {
        break;
      }
      c = get();
    }
    if (c == EOF) fail("unexpected end of header");
    while (c != EOF && !std::isspace(c) && c != '#') {
      t.push_back(static_cast<char>(c));
      c = get();
    }
    if (c == '#') in.unget(), --offset;
    return t;
  }

  long parse_int(const std::string& t, const char* what)
  {
    try {
      std::size_t pos = 0;
      const long v = std::stol(t, &pos);
      if (pos != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      fail(std::string("malformed ") + what + " '" + t + "'");
    }
  }
};

}  // namespace

ImageData load_pgm(const std::string& path)
{
  PgmReader r(path);
  const std::string magic = r.token();
  if (magic != "P2" && magic != "P5") r.fail("not a PGM (magic '" + magic + "')");
  const long w = r.parse_int(r.token(), "width");
  const long h = r.parse_int(r.token(), "height");
  const long maxval = r.parse_int(r.token(), "maxval");
  if (w <= 0 || h <= 0) r.fail("non-positive dimensions");
  if (maxval <= 0 || maxval > 65535) r.fail("maxval out of range");

  ImageData img;
  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  img.pixels.resize(static_cast<std::size_t>(w) * h);

  if (magic == "P2") {
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      const long v = r.parse_int(r.token(), "sample");
      if (v < 0 || v > maxval) r.fail("sample out of range");
      img.pixels[i] = static_cast<double>(v) / maxval;
    }
  } else {
    // the single whitespace after maxval was consumed by the tokenizer
    const int bytes_per = maxval > 255 ? 2 : 1;
    const long expected = static_cast<long>(img.pixels.size()) * bytes_per;
    std::vector<unsigned char> raw(expected);
    r.in.read(reinterpret_cast<char*>(raw.data()), expected);
    const long got = static_cast<long>(r.in.gcount());
    r.offset += got;
    if (got != expected)
      r.fail("truncated raster, expected " + std::to_string(expected) + " bytes, got " +
             std::to_string(got));
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      const long v = bytes_per == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
      if (v > maxval) r.fail("sample out of range");
      img.pixels[i] = static_cast<double>(v) / maxval;
    }
  }
  return img;
}

void write_pgm(const ImageData& img, const std::string& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("write_pgm: cannot open '" + path + "'");
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  for (double p : img.pixels) {
    const int v = std::clamp(static_cast<int>(std::lround(p * 255.0)), 0, 255);
    out.put(static_cast<char>(v));
  }
  if (!out) throw Error("write_pgm: write failure on '" + path + "'");
}

ImageData make_synthetic_image(int size)
{
  ImageData img;
  img.width = img.height = size;
  img.pixels.assign(static_cast<std::size_t>(size) * size, 0.15);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      const double x = (c + 0.5) / size;
      const double y = 1.0 - (r + 0.5) / size;
      double v = 0.15;
      if (x > 0.1 && x < 0.45 && y > 0.5 && y < 0.9) v = 0.85;            // bright block
      const double dx = x - 0.68, dy = y - 0.64;
      if (dx * dx + dy * dy < 0.045) v = 0.55;                            // mid disk
      if (x > 0.2 && x < 0.85 && y > 0.12 && y < 0.3) v = 0.35;           // bar
      if (dx * dx + dy * dy < 0.008) v = 1.0;                             // bright core
      img.pixels[static_cast<std::size_t>(r) * size + c] = v;
    }
  }
  return img;
}

RofProblem image_to_problem(const ImageData& img, double alpha, const Triangulation& mesh,
                            double eps, int quad_order)
{
  const ImageData* ptr = &img;
  return make_problem(
      mesh, alpha, [ptr](const Vec& x) { return ptr->sample_nearest(x); }, eps,
      /*dirichlet=*/false, quad_order);
}

namespace {

// uniform-bin point locator over a 2D mesh
class Locator {
public:
  explicit Locator(const Triangulation& m) : mesh_(m)
  {
    lo_ = hi_ = m.vertices[0];
    for (const Vec& v : m.vertices)
      for (int k = 0; k < 2; ++k) {
        lo_[k] = std::min(lo_[k], v[k]);
        hi_[k] = std::max(hi_[k], v[k]);
      }
    nb_ = std::max(1, static_cast<int>(std::sqrt(m.n_elements() / 2.0)));
    bins_.resize(static_cast<std::size_t>(nb_) * nb_);
    for (int e = 0; e < m.n_elements(); ++e) {
      Vec elo = m.vertices[m.elements[e][0]], ehi = elo;
      for (int i = 1; i <= 2; ++i) {
        const Vec& v = m.vertices[m.elements[e][i]];
        for (int k = 0; k < 2; ++k) {
          elo[k] = std::min(elo[k], v[k]);
          ehi[k] = std::max(ehi[k], v[k]);
        }
      }
      for (int by = bin(elo[1], 1); by <= bin(ehi[1], 1); ++by)
        for (int bx = bin(elo[0], 0); bx <= bin(ehi[0], 0); ++bx)
          bins_[static_cast<std::size_t>(by) * nb_ + bx].push_back(e);
    }
  }

  int locate(const Vec& x) const
  {
    const Triangulation& m = mesh_;
    for (int e : bins_[static_cast<std::size_t>(bin(x[1], 1)) * nb_ + bin(x[0], 0)]) {
      const Vec& a = m.vertices[m.elements[e][0]];
      const Vec& b = m.vertices[m.elements[e][1]];
      const Vec& c = m.vertices[m.elements[e][2]];
      const double det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
      const double l1 = ((x[0] - a[0]) * (c[1] - a[1]) - (x[1] - a[1]) * (c[0] - a[0])) / det;
      const double l2 = ((b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0])) / det;
      if (l1 >= -1e-12 && l2 >= -1e-12 && l1 + l2 <= 1.0 + 1e-12) return e;
    }
    return -1;
  }

private:
  int bin(double v, int k) const
  {
    return std::clamp(static_cast<int>((v - lo_[k]) / (hi_[k] - lo_[k]) * nb_), 0, nb_ - 1);
  }

  const Triangulation& mesh_;
  Vec lo_{}, hi_{};
  int nb_ = 1;
  std::vector<std::vector<int>> bins_;
};

}  // namespace

double image_l2_error_sq(const ImageData& img, const CrFunction& u)
{
  const Locator loc(*u.mesh);
  double err = 0.0;
  const double cell = 1.0 / img.width / img.height;
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < img.width; ++c) {
      const Vec x = vec((c + 0.5) / img.width, 1.0 - (r + 0.5) / img.height);
      const int e = loc.locate(x);
      if (e < 0) continue;  // outside the mesh (image meshes cover the square)
      const double d = cr_value(u, e, x) - img.pixels[static_cast<std::size_t>(r) * img.width + c];
      err += d * d * cell;
    }
  return err;
}

ImageData sample_to_image(const CrFunction& u, int width, int height)
{
  const Locator loc(*u.mesh);
  ImageData out;
  out.width = width;
  out.height = height;
  out.pixels.assign(static_cast<std::size_t>(width) * height, 0.0);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const Vec x = vec((c + 0.5) / width, 1.0 - (r + 0.5) / height);
      const int e = loc.locate(x);
      if (e >= 0)
        out.pixels[static_cast<std::size_t>(r) * width + c] =
            std::clamp(cr_value(u, e, x), 0.0, 1.0);
    }
  return out;
}

}  // namespace tvfem
