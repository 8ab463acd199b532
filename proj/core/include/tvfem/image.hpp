#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tvfem/rof.hpp"

namespace tvfem {

// Grayscale raster with values normalized to [0,1]. Row 0 is the top image
// row; sample_nearest maps it onto the unit square with y pointing up.
struct ImageData {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;  // row-major, size width*height

  double sample_nearest(const Vec& x) const
  {
    int c = static_cast<int>(x[0] * width);
    int r = static_cast<int>((1.0 - x[1]) * height);
    c = std::max(0, std::min(width - 1, c));
    r = std::max(0, std::min(height - 1, r));
    return pixels[static_cast<std::size_t>(r) * width + c];
  }
};

// Reads ASCII (P2) or binary (P5) PGM with maxval <= 65535. Parse failures
// report the offending byte offset.
ImageData load_pgm(const std::string& path);

// Writes binary P5 with maxval 255; round-trips bit-exactly against load_pgm
// for images quantized to that depth.
void write_pgm(const ImageData& img, const std::string& path);

// Piecewise-constant test image: a few flat regions with sharp edges.
ImageData make_synthetic_image(int size);

// Denoising problem on (0,1)^2 with nearest-pixel data: Gamma_D is empty.
RofProblem image_to_problem(const ImageData& img, double alpha, const Triangulation& mesh,
                            double eps, int quad_order = 3);

// Mean squared difference between a CR function and the image, sampled at
// pixel centers (the natural discrete L2 error for pixel-constant data).
double image_l2_error_sq(const ImageData& img, const CrFunction& u);

// Rasterizes a CR function on (0,1)^2 by pixel-center evaluation.
ImageData sample_to_image(const CrFunction& u, int width, int height);

}  // namespace tvfem
