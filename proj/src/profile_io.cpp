#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "morpho/error.hpp"
#include "morpho/profile_io.hpp"

namespace morpho {

namespace {

using nlohmann::json;

json column_json(const ColumnInfo& c) {
  json j;
  j["band"] = c.band;
  j["polarity"] = to_string(c.polarity);
  j["tree"] = c.tree ? json(to_string(*c.tree)) : json(nullptr);
  j["attribute"] = c.attribute ? json(to_string(*c.attribute)) : json(nullptr);
  j["threshold"] = c.threshold;
  j["value"] = c.feature ? std::string(to_string(*c.feature)) : std::string("gray");
  return j;
}

template <class E, std::size_t N>
E parse_enum(const std::string& name, const E (&options)[N], const char* what) {
  for (E e : options)
    if (to_string(e) == name) return e;
  throw InputError(std::string("profile header: unknown ") + what + " '" + name + "'");
}

ColumnInfo column_from(const json& j) {
  static constexpr Polarity polarities[] = {Polarity::Original, Polarity::Thickening,
                                            Polarity::Thinning, Polarity::SelfDual};
  static constexpr TreeKind kinds[] = {TreeKind::MaxTree, TreeKind::MinTree,
                                       TreeKind::TreeOfShapes, TreeKind::AlphaTree,
                                       TreeKind::OmegaTree};
  static constexpr Attribute attributes[] = {Attribute::Area, Attribute::MomentOfInertia};
  static constexpr Feature features[] = {Feature::StdDev, Feature::Area};
  ColumnInfo c;
  c.band = j.at("band").get<int>();
  c.polarity = parse_enum(j.at("polarity").get<std::string>(), polarities, "polarity");
  if (!j.at("tree").is_null()) c.tree = parse_enum(j["tree"].get<std::string>(), kinds, "tree");
  if (!j.at("attribute").is_null())
    c.attribute = parse_enum(j["attribute"].get<std::string>(), attributes, "attribute");
  c.threshold = j.at("threshold").get<double>();
  const auto value = j.at("value").get<std::string>();
  if (value != "gray") c.feature = parse_enum(value, features, "feature");
  return c;
}

}  // namespace

std::string layout_json(const ProfileStack& stack) {
  json j;
  j["width"] = stack.width;
  j["height"] = stack.height;
  j["dim"] = stack.dim();
  j["dtype"] = "f32";
  j["order"] = "pixel-major";
  j["columns"] = json::array();
  for (const auto& c : stack.layout) j["columns"].push_back(column_json(c));
  return j.dump(2);
}

void save_profile(const std::filesystem::path& header_path, const ProfileStack& stack) {
  std::ofstream hdr(header_path);
  if (!hdr) throw InputError("cannot write " + header_path.string());
  hdr << layout_json(stack) << '\n';

  std::string blob(stack.data.size() * 4, '\0');
  for (std::size_t i = 0; i < stack.data.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(stack.data[i]));
    for (std::size_t k = 0; k < 4; ++k) blob[4 * i + k] = static_cast<char>((bits >> (8 * k)) & 0xFF);
  }
  auto raw_path = header_path;
  raw_path.replace_extension(".raw");
  std::ofstream raw(raw_path, std::ios::binary);
  if (!raw) throw InputError("cannot write " + raw_path.string());
  raw.write(blob.data(), static_cast<std::streamsize>(blob.size()));
}

ProfileStack load_profile(const std::filesystem::path& header_path) {
  std::ifstream hdr(header_path);
  if (!hdr) throw InputError("cannot open " + header_path.string());
  ProfileStack stack;
  try {
    const json j = json::parse(hdr);
    stack.width = j.at("width").get<int>();
    stack.height = j.at("height").get<int>();
    for (const auto& c : j.at("columns")) stack.layout.push_back(column_from(c));
    if (j.at("dim").get<std::size_t>() != stack.layout.size())
      throw InputError(header_path.string() + ": dim does not match column count");
  } catch (const json::exception& e) {
    throw InputError(header_path.string() + ": malformed profile header: " + e.what());
  }

  auto raw_path = header_path;
  raw_path.replace_extension(".raw");
  std::ifstream raw(raw_path, std::ios::binary);
  if (!raw) throw InputError("cannot open " + raw_path.string());
  const std::string blob((std::istreambuf_iterator<char>(raw)), std::istreambuf_iterator<char>());
  const std::size_t count = stack.pixel_count() * stack.dim();
  if (blob.size() != count * 4)
    throw InputError(raw_path.string() + ": size mismatch, expected " +
                     std::to_string(count * 4) + " bytes");
  stack.data.resize(count);
  const auto* bytes = reinterpret_cast<const unsigned char*>(blob.data());
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t bits = 0;
    for (std::size_t k = 4; k-- > 0;) bits = (bits << 8) | bytes[4 * i + k];
    stack.data[i] = std::bit_cast<float>(bits);
  }
  return stack;
}

}  // namespace morpho
