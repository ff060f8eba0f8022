#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace quadpos {

template <class S> using Vec3 = Eigen::Matrix<S, 3, 1>;
template <class S> using Vec4 = Eigen::Matrix<S, 4, 1>;
template <class S> using Mat3 = Eigen::Matrix<S, 3, 3>;
template <class S> using Mat4 = Eigen::Matrix<S, 4, 4>;
template <class S> using Quat = Eigen::Quaternion<S>;

enum class Position { I, TI, C, TE, E };

constexpr const char* to_string(Position p) {
  switch (p) {
    case Position::I:  return "I";
    case Position::TI: return "TI";
    case Position::C:  return "C";
    case Position::TE: return "TE";
    case Position::E:  return "E";
  }
  return "?";
}

}  // namespace quadpos
