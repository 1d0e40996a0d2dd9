#ifndef LIBROT_CONSTANTS_HPP
#define LIBROT_CONSTANTS_HPP

#include <Eigen/Dense>

namespace librot {

using Real = double;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

template <class Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
template <class Scalar>
using Mat3T = Eigen::Matrix<Scalar, 3, 3>;

namespace constants {
inline constexpr double k_B = 1.380649e-23;        // J/K
inline constexpr double hbar = 1.054571817e-34;    // J s
inline constexpr double h_planck = 6.62607015e-34; // J s
inline constexpr double e_charge = 1.602176634e-19; // C
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

namespace units {
inline constexpr double torr = 133.322;   // Pa
inline constexpr double gauss = 1e-4;     // T
inline constexpr double nm = 1e-9;        // m
inline constexpr double um = 1e-6;        // m
}  // namespace units

}  // namespace librot

#endif  // LIBROT_CONSTANTS_HPP
