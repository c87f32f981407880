#pragma once

#include <vector>

#include "ymlab/form_field.hpp"
#include "ymlab/sampling.hpp"

namespace ymtest {

using namespace ymlab;

inline const std::vector<Mode> kSmoothA{
    {0, 0, {0, 1, 0}, 0.4, 0.1}, {1, 1, {0, 0, 1}, 0.35, 0.7}, {2, 2, {1, 0, 0}, 0.3, 1.3},
    {0, 2, {0, 1, 1}, 0.2, 0.4}, {1, 0, {1, 0, 1}, 0.25, 2.0}, {2, 1, {1, 1, 0}, 0.2, 0.3}};

inline const std::vector<Mode> kSmoothW{
    {0, 1, {1, 1, 0}, 0.5, 0.2}, {1, 2, {0, 1, 0}, 0.4, 0.9}, {2, 0, {0, 0, 1}, 0.3, 1.7},
    {0, 0, {1, 0, 0}, 0.3, 0.5}, {1, 1, {1, 0, 1}, 0.2, 2.2}};

inline FormField smooth_A(const Grid& g) {
  return sample_modes(g, GroupSpec::get(GroupName::SU2), 1, kSmoothA);
}

inline FormField smooth_w(const Grid& g) {
  return sample_modes(g, GroupSpec::get(GroupName::SU2), 1, kSmoothW);
}

inline FormField random_field(const Grid& g, GroupName grp, int degree, std::uint64_t stream,
                              double roughness = 1.0, double rms = 0.5) {
  SpectralSampler s;
  s.roughness = roughness;
  s.rms = rms;
  s.zero_mean = false;
  return sample_spectral(g, GroupSpec::get(grp), degree, s, 99, stream);
}

inline double rel(const FormField& a, const FormField& b) {
  return norm2(a - b) / norm2(b);
}

}  // namespace ymtest
