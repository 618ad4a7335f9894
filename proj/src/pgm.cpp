#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

#include "morpho/error.hpp"
#include "morpho/imagery.hpp"

namespace morpho {

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ >= bytes_.size(); }

  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Unsigned decimal token. Returns false on end of input.
  bool number(unsigned long& value, const char* what) {
    skip_separators();
    if (at_end()) return false;
    const std::size_t start = pos_;
    value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFul) throw ParseError(std::string("number too large in ") + what, start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError(std::string("expected decimal ") + what, start);
    if (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])) &&
        bytes_[pos_] != '#')
      throw ParseError(std::string("unexpected character after ") + what, pos_);
    return true;
  }

  unsigned char byte() { return static_cast<unsigned char>(bytes_[pos_++]); }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  void advance() { ++pos_; }
  char peek() const { return bytes_[pos_]; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

RasterImage parse_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw ParseError("not a PGM file (expected magic P2 or P5)", 0);
  const bool binary = bytes[1] == '5';
  PgmReader in(bytes.substr(2));
  const auto at = [&] { return in.offset() + 2; };

  unsigned long width = 0, height = 0, maxval = 0;
  if (!in.number(width, "width")) throw ParseError("missing width", at());
  if (!in.number(height, "height")) throw ParseError("missing height", at());
  if (!in.number(maxval, "maxval")) throw ParseError("missing maxval", at());
  if (width == 0 || height == 0) throw ParseError("zero image dimension", at());
  if (maxval == 0 || maxval > 65535) throw ParseError("maxval must lie in [1, 65535]", at());

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<std::uint16_t> values(count);

  if (binary) {
    if (in.at_end() || !std::isspace(static_cast<unsigned char>(in.peek())))
      throw ParseError("missing separator before raster", at());
    in.advance();
    const std::size_t sample_bytes = maxval < 256 ? 1 : 2;
    for (std::size_t i = 0; i < count; ++i) {
      if (in.remaining() < sample_bytes)
        throw ParseError("truncated raster: expected " + std::to_string(count) +
                             " pixels, data ends at pixel " + std::to_string(i),
                         at());
      unsigned v = in.byte();
      if (sample_bytes == 2) v = (v << 8) | in.byte();
      if (v > maxval) throw ParseError("sample exceeds maxval", at() - sample_bytes);
      values[i] = static_cast<std::uint16_t>(v);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      unsigned long v = 0;
      if (!in.number(v, "sample"))
        throw ParseError("truncated raster: expected " + std::to_string(count) +
                             " pixels, data ends at pixel " + std::to_string(i),
                         at());
      if (v > maxval) throw ParseError("sample exceeds maxval", at());
      values[i] = static_cast<std::uint16_t>(v);
    }
  }
  return RasterImage(static_cast<int>(width), static_cast<int>(height),
                     static_cast<int>(maxval) + 1, std::move(values));
}

RasterImage load_grayscale(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot open image: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  try {
    return parse_pgm(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.offset());
  }
}

std::string encode_pgm(const RasterImage& image, bool binary) {
  const int maxval = std::max(1, image.levels() - 1);
  std::ostringstream out;
  out << (binary ? "P5" : "P2") << '\n'
      << image.width() << ' ' << image.height() << '\n'
      << maxval << '\n';
  if (binary) {
    for (std::uint16_t v : image.values()) {
      if (maxval >= 256) out.put(static_cast<char>(v >> 8));
      out.put(static_cast<char>(v & 0xFF));
    }
  } else {
    for (int y = 0; y < image.height(); ++y) {
      for (int x = 0; x < image.width(); ++x) out << (x ? " " : "") << image.at(x, y);
      out << '\n';
    }
  }
  return out.str();
}

void save_pgm(const std::filesystem::path& path, const RasterImage& image, bool binary) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write image: " + path.string());
  file << encode_pgm(image, binary);
}

}  // namespace morpho
