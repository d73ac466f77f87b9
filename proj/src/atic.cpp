#include "ati/atic.hpp"

#include <bit>
#include <cstring>

#include "ati/file_util.hpp"

namespace ati {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
}

std::uint32_t get_u32(std::string_view in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + k])) << (8 * k);
  }
  return v;
}

}  // namespace

std::string encode_atic(const ConditionTensor& tensor) {
  std::string out;
  out.reserve(kAticHeaderSize + tensor.values().size() * 4);
  out.append(kAticMagic, 4);
  put_u32(out, kAticVersion);
  put_u32(out, static_cast<std::uint32_t>(tensor.latent_frames()));
  put_u32(out, static_cast<std::uint32_t>(tensor.height()));
  put_u32(out, static_cast<std::uint32_t>(tensor.width()));
  put_u32(out, static_cast<std::uint32_t>(tensor.channels()));
  for (double v : tensor.values()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

ConditionTensor decode_atic(std::string_view bytes) {
  if (bytes.size() < kAticHeaderSize) throw FormatError("ATIC header truncated");
  if (std::memcmp(bytes.data(), kAticMagic, 4) != 0) throw FormatError("bad ATIC magic");
  const auto version = get_u32(bytes, 4);
  if (version != kAticVersion) {
    throw FormatError("unsupported ATIC version " + std::to_string(version));
  }
  const auto frames = get_u32(bytes, 8);
  const auto height = get_u32(bytes, 12);
  const auto width = get_u32(bytes, 16);
  const auto channels = get_u32(bytes, 20);
  if (channels < 1) throw FormatError("ATIC tensor must have at least one channel");
  const std::uint64_t payload = bytes.size() - kAticHeaderSize;
  const std::uint64_t capacity = payload / 4;
  std::uint64_t count = 1;
  for (std::uint64_t dim : {frames, height, width, channels}) {
    if (dim != 0 && count > capacity / dim) throw FormatError("ATIC payload truncated");
    count *= dim;
  }
  if (payload < count * 4) throw FormatError("ATIC payload truncated");
  if (payload > count * 4) throw FormatError("trailing bytes after ATIC payload");
  if (frames > INT32_MAX || height > INT32_MAX || width > INT32_MAX || channels > INT32_MAX) {
    throw FormatError("ATIC dimensions out of range");
  }

  std::vector<double> values(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    values[k] = std::bit_cast<float>(get_u32(bytes, kAticHeaderSize + 4 * k));
  }
  return ConditionTensor(static_cast<int>(frames), static_cast<int>(height),
                         static_cast<int>(width), static_cast<int>(channels), std::move(values));
}

void save_atic(const std::filesystem::path& path, const ConditionTensor& tensor) {
  write_file_atomic(path, encode_atic(tensor));
}

ConditionTensor load_atic(const std::filesystem::path& path) { return decode_atic(read_file(path)); }

}  // namespace ati
