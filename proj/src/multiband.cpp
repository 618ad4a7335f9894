#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "morpho/error.hpp"
#include "morpho/imagery.hpp"

namespace morpho {

namespace {

std::size_t sample_size(SampleType type) {
  switch (type) {
    case SampleType::U8: return 1;
    case SampleType::U16: return 2;
    case SampleType::F32: return 4;
  }
  return 0;
}

const char* sample_name(SampleType type) {
  switch (type) {
    case SampleType::U8: return "u8";
    case SampleType::U16: return "u16";
    case SampleType::F32: return "f32";
  }
  return "?";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
}

int positive_field(const nlohmann::json& header, const char* key,
                   const std::filesystem::path& path) {
  if (!header.contains(key) || !header[key].is_number_integer() || header[key].get<long>() < 1)
    throw InputError(path.string() + ": header field '" + key + "' must be a positive integer");
  return header[key].get<int>();
}

}  // namespace

MultibandImage load_multiband(const std::filesystem::path& header_path) {
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(read_file(header_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(header_path.string() + ": invalid JSON header", e.byte);
  }
  const int width = positive_field(header, "width", header_path);
  const int height = positive_field(header, "height", header_path);
  const int bands = positive_field(header, "bands", header_path);

  const std::string dtype = header.value("dtype", "");
  SampleType type;
  if (dtype == "u8") type = SampleType::U8;
  else if (dtype == "u16") type = SampleType::U16;
  else if (dtype == "f32") type = SampleType::F32;
  else throw InputError(header_path.string() + ": unsupported dtype '" + dtype + "'");

  const std::string interleave = header.value("interleave", "");
  if (interleave != "bsq")
    throw InputError(header_path.string() + ": unsupported interleave '" + interleave + "'");

  auto raw_path = header_path;
  raw_path.replace_extension(".raw");
  const std::string blob = read_file(raw_path);

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                            static_cast<std::size_t>(bands);
  const std::size_t expected = count * sample_size(type);
  if (blob.size() != expected)
    throw InputError(raw_path.string() + ": size mismatch, expected " + std::to_string(expected) +
                     " bytes, found " + std::to_string(blob.size()));

  std::vector<double> values(count);
  const auto* bytes = reinterpret_cast<const unsigned char*>(blob.data());
  for (std::size_t i = 0; i < count; ++i) {
    switch (type) {
      case SampleType::U8:
        values[i] = bytes[i];
        break;
      case SampleType::U16:
        values[i] = static_cast<double>(bytes[2 * i] | (bytes[2 * i + 1] << 8));
        break;
      case SampleType::F32: {
        std::uint32_t bits = 0;
        for (int k = 3; k >= 0; --k) bits = (bits << 8) | bytes[4 * i + static_cast<std::size_t>(k)];
        values[i] = std::bit_cast<float>(bits);
        break;
      }
    }
  }
  return MultibandImage(width, height, bands, std::move(values));
}

void save_multiband(const std::filesystem::path& header_path, const MultibandImage& image,
                    SampleType type) {
  nlohmann::json header = {{"width", image.width()},
                           {"height", image.height()},
                           {"bands", image.bands()},
                           {"dtype", sample_name(type)},
                           {"interleave", "bsq"}};
  std::ofstream hdr(header_path);
  if (!hdr) throw InputError("cannot write " + header_path.string());
  hdr << header.dump(2) << '\n';

  std::string blob;
  blob.reserve(image.values().size() * sample_size(type));
  for (double v : image.values()) {
    switch (type) {
      case SampleType::U8:
        blob.push_back(static_cast<char>(static_cast<std::uint8_t>(v)));
        break;
      case SampleType::U16: {
        const auto s = static_cast<std::uint16_t>(v);
        blob.push_back(static_cast<char>(s & 0xFF));
        blob.push_back(static_cast<char>(s >> 8));
        break;
      }
      case SampleType::F32: {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        for (int k = 0; k < 4; ++k) blob.push_back(static_cast<char>((bits >> (8 * k)) & 0xFF));
        break;
      }
    }
  }
  auto raw_path = header_path;
  raw_path.replace_extension(".raw");
  std::ofstream raw(raw_path, std::ios::binary);
  if (!raw) throw InputError("cannot write " + raw_path.string());
  raw.write(blob.data(), static_cast<std::streamsize>(blob.size()));
}

LabelMap load_labels(const std::filesystem::path& path, int expected_width, int expected_height) {
  const RasterImage raster = load_grayscale(path);
  if (raster.width() != expected_width || raster.height() != expected_height)
    throw InputError(path.string() + ": label map is " + std::to_string(raster.width()) + "x" +
                     std::to_string(raster.height()) + ", image is " +
                     std::to_string(expected_width) + "x" + std::to_string(expected_height));
  return LabelMap{raster.width(), raster.height(),
                  std::vector<std::uint16_t>(raster.values().begin(), raster.values().end())};
}

void save_labels(const std::filesystem::path& path, const LabelMap& labels) {
  const int top = std::max(1, labels.max_class());
  save_pgm(path, RasterImage(labels.width, labels.height, top + 1, labels.labels));
}

}  // namespace morpho
