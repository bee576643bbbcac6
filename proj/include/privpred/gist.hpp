#ifndef PRIVPRED_GIST_HPP
#define PRIVPRED_GIST_HPP

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <vector>

#include "privpred/common.hpp"

namespace privpred::gist {

// Row-major grey levels in [0, 1]; rows = height.
using GrayImage = Eigen::MatrixXd;

struct GistConfig {
  int scales = 4;
  int orientations = 8;
  int grid = 4;  // grid x grid pooling cells
  double peak_frequency = 0.25;  // cycles/pixel of the finest scale; halves per scale
  double octave_bandwidth = 1.0;  // full width at half maximum in octaves
  double angular_sigma = std::numbers::pi / 16.0;
  bool prefilter = false;  // local contrast normalization before filtering

  int filter_count() const { return scales * orientations; }
  int descriptor_length() const { return filter_count() * grid * grid; }
  void validate() const;
};

// Frequency-domain transfer functions, one H x W real matrix per filter, ordered
// scale-major then orientation. Entry (r, c) is the gain at DFT bin (r, c).
std::vector<Eigen::MatrixXd> gabor_bank(const GistConfig& cfg, int height, int width);

// Mean of each grid cell of a response map, cells in row-major order. Cells have
// size floor(H/grid) x floor(W/grid); the last row/column of cells takes the remainder.
Eigen::VectorXd pool_grid(const Eigen::Ref<const Eigen::MatrixXd>& map, int grid);

// Filters through the FFT, takes the response magnitude and grid-pools every map.
Eigen::VectorXd gist_descriptor(const GrayImage& image, const GistConfig& cfg = {});

// Magnitude responses only (before pooling); exposed for checking against other
// convolution routes.
std::vector<Eigen::MatrixXd> filter_responses(const GrayImage& image, const GistConfig& cfg = {});

GrayImage prefilter(const GrayImage& image);

// Binary PGM (P5) with maxval <= 255, rescaled to [0, 1].
GrayImage read_pgm(const std::filesystem::path& path);
GrayImage read_pgm(std::istream& in);
void write_pgm(std::ostream& out, const GrayImage& image);

}  // namespace privpred::gist

#endif  // PRIVPRED_GIST_HPP
