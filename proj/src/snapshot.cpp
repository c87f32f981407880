#include "ymlab/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "ymlab/error.hpp"

namespace ymlab {

namespace {

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

template <typename T>
T get(const std::vector<std::uint8_t>& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw Error(ErrorCode::Io, "snapshot truncated");
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, raw, sizeof(T));
  return value;
}

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const FormField& f) {
  std::vector<std::uint8_t> out{'Y', 'M', 'F', '1'};
  out.reserve(28 + f.data().size() * 8);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.degree()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid().n()));
  put<double>(out, f.grid().L());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.group().name()));
  for (std::size_t s = 0; s < f.sites(); ++s)
    for (int c = 0; c < f.components(); ++c)
      for (int a = 0; a < f.dim(); ++a) put<double>(out, f.channel(c, a)[s]);
  return out;
}

FormField decode_snapshot(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "YMF1", 4) != 0)
    throw Error(ErrorCode::Io, "snapshot: bad magic");
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(bytes, pos);
  if (version != kSnapshotVersion)
    throw Error(ErrorCode::Io, "snapshot: unsupported version " + std::to_string(version));
  const auto degree = get<std::uint32_t>(bytes, pos);
  const auto n = get<std::uint32_t>(bytes, pos);
  const auto L = get<double>(bytes, pos);
  const auto tag = get<std::uint32_t>(bytes, pos);
  if (degree > 3) throw Error(ErrorCode::Io, "snapshot: bad degree");
  if (tag > 1) throw Error(ErrorCode::Io, "snapshot: bad group tag");
  FormField f(Grid(static_cast<int>(n), L), static_cast<GroupName>(tag), static_cast<int>(degree));
  if (bytes.size() != pos + f.data().size() * 8)
    throw Error(ErrorCode::Io, "snapshot: payload size mismatch");
  for (std::size_t s = 0; s < f.sites(); ++s)
    for (int c = 0; c < f.components(); ++c)
      for (int a = 0; a < f.dim(); ++a) f.channel(c, a)[s] = get<double>(bytes, pos);
  return f;
}

void write_snapshot(const FormField& f, const std::string& path) {
  const auto bytes = encode_snapshot(f);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error(ErrorCode::Io, "write failed: " + path);
}

FormField read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace ymlab
