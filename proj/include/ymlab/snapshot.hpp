#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ymlab/form_field.hpp"

namespace ymlab {

// Binary field snapshot, little-endian:
//   "YMF1" | version u32 | degree u32 | n u32 | L f64 | group tag u32 |
//   f64 payload ordered by site (z slowest, x fastest), then component, then
//   basis index.
inline constexpr std::uint32_t kSnapshotVersion = 1;

std::vector<std::uint8_t> encode_snapshot(const FormField& f);
FormField decode_snapshot(const std::vector<std::uint8_t>& bytes);

void write_snapshot(const FormField& f, const std::string& path);
FormField read_snapshot(const std::string& path);

}  // namespace ymlab
