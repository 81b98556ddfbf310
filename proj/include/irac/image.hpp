#ifndef IRAC_IMAGE_HPP
#define IRAC_IMAGE_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "irac/common.hpp"

namespace irac {

/// RGB image with samples in [0, 1], stored row-major and
/// channel-interleaved: samples[(row * width + col) * 3 + channel].
/// `length` is the vertical dimension (number of rows).
struct Image {
  int width = 0;
  int length = 0;
  std::vector<double> samples;

  Image() = default;
  Image(int w, int l, double fill = 0.0)
      : width(w), length(l), samples(static_cast<std::size_t>(3) * w * l, fill) {}

  double& at(int row, int col, int ch) {
    return samples[(static_cast<std::size_t>(row) * width + col) * 3 + ch];
  }
  double at(int row, int col, int ch) const {
    return samples[(static_cast<std::size_t>(row) * width + col) * 3 + ch];
  }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * length; }
};

inline void validate_image(const Image& img, const char* name) {
  require(img.width > 0 && img.length > 0, std::string(name) + ": empty image");
  require(img.samples.size() == static_cast<std::size_t>(3) * img.width * img.length,
          std::string(name) + ": sample count does not match 3*L*W");
  for (double v : img.samples)
    require(std::isfinite(v) && v >= 0.0 && v <= 1.0,
            std::string(name) + ": sample outside [0,1]");
}

namespace detail {
inline int ppm_next_int(std::istream& in) {
  // Skips whitespace and '#' comments between header tokens.
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
    } else if (!std::isspace(c)) {
      in.unget();
      break;
    }
  }
  int value;
  if (!(in >> value)) throw ValidationError("ppm: malformed header");
  return value;
}
}  // namespace detail

/// Reads a binary (P6) portable pixmap with 8-bit samples; values are
/// mapped to [0, 1] by dividing by maxval.
inline Image read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "ppm: cannot open " + path);
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  require(m0 == 'P' && m1 == '6', "ppm: not a binary P6 file: " + path);
  int w = detail::ppm_next_int(in);
  int l = detail::ppm_next_int(in);
  int maxval = detail::ppm_next_int(in);
  require(w > 0 && l > 0, "ppm: bad dimensions in " + path);
  require(maxval > 0 && maxval < 256, "ppm: only 8-bit maxval supported");
  in.get();  // single whitespace after maxval
  Image img(w, l);
  std::vector<unsigned char> raw(static_cast<std::size_t>(3) * w * l);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  require(static_cast<std::size_t>(in.gcount()) == raw.size(), "ppm: truncated pixel data");
  for (std::size_t i = 0; i < raw.size(); ++i)
    img.samples[i] = static_cast<double>(raw[i]) / maxval;
  return img;
}

inline void write_ppm(const std::string& path, const Image& img) {
  validate_image(img, "write_ppm");
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "ppm: cannot write " + path);
  out << "P6\n" << img.width << " " << img.length << "\n255\n";
  std::vector<unsigned char> raw(img.samples.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    long q = std::lround(img.samples[i] * 255.0);
    raw[i] = static_cast<unsigned char>(q < 0 ? 0 : (q > 255 ? 255 : q));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

}  // namespace irac

#endif  // IRAC_IMAGE_HPP
