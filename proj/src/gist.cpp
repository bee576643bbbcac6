#include "privpred/gist.hpp"

#include <unsupported/Eigen/FFT>

#include <complex>
#include <fstream>
#include <istream>
#include <ostream>

namespace privpred::gist {
namespace {

using ComplexMatrix = Eigen::MatrixXcd;

ComplexMatrix transform2d(const ComplexMatrix& in, bool inverse) {
  Eigen::FFT<double> fft;
  ComplexMatrix out = in;
  Eigen::VectorXcd buffer_in, buffer_out;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    buffer_in = out.row(r).transpose();
    if (inverse)
      fft.inv(buffer_out, buffer_in);
    else
      fft.fwd(buffer_out, buffer_in);
    out.row(r) = buffer_out.transpose();
  }
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    buffer_in = out.col(c);
    if (inverse)
      fft.inv(buffer_out, buffer_in);
    else
      fft.fwd(buffer_out, buffer_in);
    out.col(c) = buffer_out;
  }
  return out;
}

// Signed DFT frequency of bin k out of n, in cycles per sample: [-0.5, 0.5).
double bin_frequency(Eigen::Index k, Eigen::Index n) {
  const Eigen::Index signed_k = k < (n + 1) / 2 ? k : k - n;
  return static_cast<double>(signed_k) / static_cast<double>(n);
}

// Angle difference folded into [-pi/2, pi/2): filters respond to +f and -f alike.
double fold_angle(double delta) {
  constexpr double pi = std::numbers::pi;
  delta = std::fmod(delta + pi / 2.0, pi);
  if (delta < 0.0) delta += pi;
  return delta - pi / 2.0;
}

void check_image(const GrayImage& image) {
  if (image.rows() < 8 || image.cols() < 8) throw InputError("gist: image must be at least 8x8");
  if (!image.allFinite()) throw InputError("gist: non-finite pixel value");
}

}  // namespace

void GistConfig::validate() const {
  if (scales < 1 || orientations < 1 || grid < 1) throw InputError("gist: scales, orientations and grid must be positive");
  if (!(peak_frequency > 0.0 && peak_frequency <= 0.5)) throw InputError("gist: peak frequency must lie in (0, 0.5]");
  if (!(octave_bandwidth > 0.0) || !(angular_sigma > 0.0)) throw InputError("gist: bandwidths must be positive");
}

std::vector<Eigen::MatrixXd> gabor_bank(const GistConfig& cfg, int height, int width) {
  cfg.validate();
  if (height < 8 || width < 8) throw InputError("gist: filter bank needs at least 8x8");
  const double log_sigma = cfg.octave_bandwidth / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  std::vector<Eigen::MatrixXd> bank;
  bank.reserve(static_cast<std::size_t>(cfg.filter_count()));
  for (int s = 0; s < cfg.scales; ++s) {
    const double centre = cfg.peak_frequency * std::pow(2.0, -s);
    for (int o = 0; o < cfg.orientations; ++o) {
      const double theta = o * std::numbers::pi / cfg.orientations;
      Eigen::MatrixXd gain(height, width);
      for (Eigen::Index r = 0; r < height; ++r) {
        const double fy = bin_frequency(r, height);
        for (Eigen::Index c = 0; c < width; ++c) {
          const double fx = bin_frequency(c, width);
          const double radius = std::hypot(fx, fy);
          if (radius == 0.0) {
            gain(r, c) = 0.0;
            continue;
          }
          const double octaves = std::log2(radius / centre);
          const double delta = fold_angle(std::atan2(fy, fx) - theta);
          gain(r, c) = std::exp(-octaves * octaves / (2.0 * log_sigma * log_sigma)) *
                       std::exp(-delta * delta / (2.0 * cfg.angular_sigma * cfg.angular_sigma));
        }
      }
      const double peak = gain.maxCoeff();
      if (peak > 0.0) gain /= peak;
      bank.push_back(std::move(gain));
    }
  }
  return bank;
}

Eigen::VectorXd pool_grid(const Eigen::Ref<const Eigen::MatrixXd>& map, int grid) {
  if (grid < 1 || map.rows() < grid || map.cols() < grid) throw InputError("gist: grid larger than image");
  const Eigen::Index cell_h = map.rows() / grid, cell_w = map.cols() / grid;
  Eigen::VectorXd pooled(grid * grid);
  for (int gr = 0; gr < grid; ++gr) {
    const Eigen::Index r0 = gr * cell_h;
    const Eigen::Index h = gr == grid - 1 ? map.rows() - r0 : cell_h;
    for (int gc = 0; gc < grid; ++gc) {
      const Eigen::Index c0 = gc * cell_w;
      const Eigen::Index w = gc == grid - 1 ? map.cols() - c0 : cell_w;
      pooled[gr * grid + gc] = map.block(r0, c0, h, w).mean();
    }
  }
  return pooled;
}

std::vector<Eigen::MatrixXd> filter_responses(const GrayImage& image, const GistConfig& cfg) {
  check_image(image);
  const GrayImage input = cfg.prefilter ? prefilter(image) : image;
  const auto bank = gabor_bank(cfg, static_cast<int>(input.rows()), static_cast<int>(input.cols()));
  const ComplexMatrix spectrum = transform2d(input.cast<std::complex<double>>(), false);
  std::vector<Eigen::MatrixXd> responses;
  responses.reserve(bank.size());
  for (const auto& filter : bank) {
    const ComplexMatrix filtered = spectrum.cwiseProduct(filter.cast<std::complex<double>>());
    responses.push_back(transform2d(filtered, true).cwiseAbs());
  }
  return responses;
}

Eigen::VectorXd gist_descriptor(const GrayImage& image, const GistConfig& cfg) {
  const auto responses = filter_responses(image, cfg);
  const int cells = cfg.grid * cfg.grid;
  Eigen::VectorXd descriptor(cfg.descriptor_length());
  for (std::size_t f = 0; f < responses.size(); ++f)
    descriptor.segment(static_cast<Eigen::Index>(f) * cells, cells) = pool_grid(responses[f], cfg.grid);
  return descriptor;
}

GrayImage prefilter(const GrayImage& image) {
  check_image(image);
  constexpr double cutoff = 4.0;  // cycles per image
  const double s1 = cutoff / std::sqrt(std::log(2.0));
  const Eigen::Index h = image.rows(), w = image.cols();
  Eigen::MatrixXd lowpass(h, w);
  for (Eigen::Index r = 0; r < h; ++r)
    for (Eigen::Index c = 0; c < w; ++c) {
      const double fy = bin_frequency(r, h) * static_cast<double>(h);
      const double fx = bin_frequency(c, w) * static_cast<double>(w);
      lowpass(r, c) = std::exp(-(fx * fx + fy * fy) / (s1 * s1));
    }
  const auto smooth = [&](const Eigen::MatrixXd& m) {
    return transform2d(transform2d(m.cast<std::complex<double>>(), false).cwiseProduct(
                           lowpass.cast<std::complex<double>>()),
                       true)
        .real()
        .eval();
  };
  const Eigen::MatrixXd logged = (image.array() + 1.0).log().matrix();
  const Eigen::MatrixXd highpass = logged - smooth(logged);
  const Eigen::MatrixXd local_std = smooth(highpass.cwiseProduct(highpass)).cwiseAbs().cwiseSqrt();
  return (highpass.array() / (0.2 + local_std.array())).matrix();
}

GrayImage read_pgm(std::istream& in) {
  const auto next_token = [&in]() {
    std::string token;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        std::string ignored;
        std::getline(in, ignored);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!token.empty()) return token;
        continue;
      }
      token += c;
    }
    return token;
  };
  if (next_token() != "P5") throw InputError("pgm: not a binary P5 graymap");
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(next_token());
    height = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw InputError("pgm: malformed header");
  }
  if (width <= 0 || height <= 0) throw InputError("pgm: bad dimensions");
  if (maxval <= 0 || maxval > 255) throw InputError("pgm: only maxval 1..255 is supported");
  std::vector<unsigned char> bytes(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) throw InputError("pgm: truncated pixel data");
  GrayImage image(height, width);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      const unsigned value = bytes[static_cast<std::size_t>(r) * static_cast<std::size_t>(width) + c];
      if (value > static_cast<unsigned>(maxval)) throw InputError("pgm: pixel exceeds maxval");
      image(r, c) = static_cast<double>(value) / maxval;
    }
  return image;
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const GrayImage& image) {
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  for (Eigen::Index r = 0; r < image.rows(); ++r)
    for (Eigen::Index c = 0; c < image.cols(); ++c) {
      const double v = std::clamp(image(r, c), 0.0, 1.0);
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
    }
}

}  // namespace privpred::gist
