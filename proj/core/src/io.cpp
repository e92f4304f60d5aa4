#include "acce/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

namespace acce {

namespace {

std::vector<unsigned char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for '" + path.string() + "'");
  return bytes;
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

// Header token reader for the netpbm family: skips whitespace and '#' comments.
class PnmHeader {
 public:
  explicit PnmHeader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  long next_int(const std::string& what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw FormatError("PPM header: expected " + what);
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > std::numeric_limits<int>::max()) {
        throw FormatError("PPM header: " + what + " out of range");
      }
      ++pos_;
    }
    return value;
  }

  std::string next_token() {
    skip_space_and_comments();
    std::string token;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) {
      token.push_back(static_cast<char>(bytes_[pos_++]));
    }
    return token;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw FormatError("PPM header: missing separator before raster");
    }
    return pos_ + 1;
  }

  void seek(std::size_t pos) { pos_ = pos; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

RgbImage decode_ppm(const std::vector<unsigned char>& bytes) {
  PnmHeader header(bytes);
  header.seek(2);
  const long w = header.next_int("width");
  const long h = header.next_int("height");
  const long maxval = header.next_int("maxval");
  if (w < 1 || h < 1) throw FormatError("PPM: zero image dimension");
  if (maxval != 255) {
    throw FormatError("PPM: only maxval 255 is supported, got " + std::to_string(maxval));
  }
  const std::size_t offset = header.raster_offset();
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - offset < count * 3) throw FormatError("PPM: truncated raster");

  RgbImage img(static_cast<int>(w), static_cast<int>(h));
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t c = 0; c < 3; ++c) {
      img[c].samples()[k] = bytes[offset + 3 * k + c] / 255.0;
    }
  }
  return img;
}

RgbImage decode_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str())) {
    std::string msg = image.message;
    png_image_free(&image);
    throw FormatError("PNG: " + msg);
  }
  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    throw FormatError("PNG: 16-bit images are not supported");
  }
  image.format = PNG_FORMAT_RGBA;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw FormatError("PNG: " + msg);
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  RgbImage img(w, h);
  const std::size_t count = static_cast<std::size_t>(w) * h;
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t c = 0; c < 3; ++c) img[c].samples()[k] = buffer[4 * k + c] / 255.0;
  }
  return img;
}

void write_bytes(const std::filesystem::path& path, const std::string& header,
                 const std::vector<unsigned char>& payload) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<unsigned char> interleave(const RgbImage& img) {
  const std::size_t count = static_cast<std::size_t>(img.width()) * img.height();
  std::vector<unsigned char> bytes(count * 3);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t c = 0; c < 3; ++c) bytes[3 * k + c] = quantize_sample(img[c].samples()[k]);
  }
  return bytes;
}

}  // namespace

std::uint8_t quantize_sample(double v) noexcept {
  if (!(v > 0.0)) return 0;  // also maps NaN to 0
  const double scaled = std::floor(v * 255.0 + 0.5);
  return static_cast<std::uint8_t>(std::min(scaled, 255.0));
}

RgbImage load_image(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  static constexpr unsigned char kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(std::begin(kPngMagic), std::end(kPngMagic), bytes.begin())) {
    return decode_png(path);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    if (bytes[1] == '6') return decode_ppm(bytes);
    throw FormatError("unsupported netpbm variant 'P" + std::string(1, static_cast<char>(bytes[1])) +
                      "' in '" + path.string() + "'");
  }
  throw FormatError("unrecognized image format in '" + path.string() + "'");
}

void save_image(const RgbImage& img, const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".ppm" || ext == ".pnm") {
    const std::string header = "P6\n" + std::to_string(img.width()) + " " +
                               std::to_string(img.height()) + "\n255\n";
    write_bytes(path, header, interleave(img));
    return;
  }
  if (ext != ".png") {
    throw FormatError("cannot infer output format from extension '" + ext + "'");
  }
  const auto bytes = interleave(img);
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, bytes.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("PNG write to '" + path.string() + "' failed: " + msg);
  }
}

void write_pfm(const std::filesystem::path& path, const std::array<const Plane*, 3>& channels) {
  const Plane& first = *channels[0];
  for (const Plane* p : channels) {
    if (!p->same_shape(first)) throw ContractError("write_pfm: channel shapes differ");
  }
  const int w = first.width();
  const int h = first.height();
  // Negative scale marks little-endian data.
  const std::string header = "PF\n" + std::to_string(w) + " " + std::to_string(h) + "\n-1.0\n";
  std::vector<unsigned char> payload(static_cast<std::size_t>(w) * h * 3 * sizeof(float));
  std::size_t pos = 0;
  for (int y = h - 1; y >= 0; --y) {
    for (int x = 0; x < w; ++x) {
      for (const Plane* p : channels) {
        auto bits = std::bit_cast<std::uint32_t>(static_cast<float>((*p)(x, y)));
        for (int b = 0; b < 4; ++b) payload[pos++] = static_cast<unsigned char>(bits >> (8 * b));
      }
    }
  }
  write_bytes(path, header, payload);
}

std::array<Plane, 3> read_pfm(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != 'F') {
    throw FormatError("'" + path.string() + "' is not a color PFM file");
  }
  PnmHeader header(bytes);
  header.seek(2);
  const long w = header.next_int("width");
  const long h = header.next_int("height");
  // Only the little-endian form written by write_pfm is accepted.
  const std::string scale = header.next_token();
  if (scale.empty() || scale[0] != '-') {
    throw FormatError("PFM: only little-endian (negative scale) data is supported");
  }
  std::size_t pos = header.raster_offset();
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - pos < count * 12) throw FormatError("PFM: truncated raster");

  std::array<Plane, 3> out{Plane(static_cast<int>(w), static_cast<int>(h)),
                           Plane(static_cast<int>(w), static_cast<int>(h)),
                           Plane(static_cast<int>(w), static_cast<int>(h))};
  for (long y = h - 1; y >= 0; --y) {
    for (long x = 0; x < w; ++x) {
      for (auto& p : out) {
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes[pos++]) << (8 * b);
        p(static_cast<int>(x), static_cast<int>(y)) = std::bit_cast<float>(bits);
      }
    }
  }
  return out;
}

}  // namespace acce
