#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

namespace geomir {

/// CIE L*a*b* triple. L in [0, 100]; a and b nominally in [-128, 128].
template <typename Scalar>
struct Lab {
  Scalar L{};
  Scalar a{};
  Scalar b{};

  friend bool operator==(const Lab&, const Lab&) = default;
};

using LabPixel = Lab<double>;

namespace color {

/// Linear-light sRGB (D65) to CIE XYZ, 2 degree observer.
template <typename Scalar>
const Eigen::Matrix<Scalar, 3, 3>& srgb_to_xyz_matrix() {
  static const Eigen::Matrix<Scalar, 3, 3> m = (Eigen::Matrix<Scalar, 3, 3>() <<
      Scalar(0.4124564), Scalar(0.3575761), Scalar(0.1804375),
      Scalar(0.2126729), Scalar(0.7151522), Scalar(0.0721750),
      Scalar(0.0193339), Scalar(0.1191920), Scalar(0.9503041)).finished();
  return m;
}

/// D65 reference white, 2 degree observer: the XYZ of linear (1, 1, 1)
/// under the matrix above (0.95047, 1.0000001, 1.08883), so sRGB white has
/// exactly zero chroma.
template <typename Scalar>
const Eigen::Matrix<Scalar, 3, 1>& d65_white() {
  static const Eigen::Matrix<Scalar, 3, 1> white =
      srgb_to_xyz_matrix<Scalar>() * Eigen::Matrix<Scalar, 3, 1>::Ones();
  return white;
}

/// IEC 61966-2-1 transfer function inverse: 8-bit code value to linear light.
template <typename Scalar>
Scalar srgb_expand(std::uint8_t code) {
  const Scalar c = Scalar(code) / Scalar(255);
  return c <= Scalar(0.04045) ? c / Scalar(12.92)
                              : std::pow((c + Scalar(0.055)) / Scalar(1.055), Scalar(2.4));
}

template <typename Scalar>
Scalar lab_f(Scalar t) {
  constexpr double delta = 6.0 / 29.0;
  if (t > Scalar(delta * delta * delta)) return std::cbrt(t);
  return t / Scalar(3.0 * delta * delta) + Scalar(4.0 / 29.0);
}

template <typename Scalar>
Lab<Scalar> linear_to_lab(const Eigen::Matrix<Scalar, 3, 1>& linear_rgb) {
  const Eigen::Matrix<Scalar, 3, 1> xyz =
      (srgb_to_xyz_matrix<Scalar>() * linear_rgb).cwiseQuotient(d65_white<Scalar>());
  const Scalar fx = lab_f(xyz.x());
  const Scalar fy = lab_f(xyz.y());
  const Scalar fz = lab_f(xyz.z());
  return {Scalar(116) * fy - Scalar(16), Scalar(500) * (fx - fy), Scalar(200) * (fy - fz)};
}

}  // namespace color

/// sRGB (8 bit per channel) to CIE L*a*b*, illuminant D65, 2 degree observer.
template <typename Scalar = double>
Lab<Scalar> srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return color::linear_to_lab<Scalar>({color::srgb_expand<Scalar>(r),
                                       color::srgb_expand<Scalar>(g),
                                       color::srgb_expand<Scalar>(b)});
}

}  // namespace geomir
