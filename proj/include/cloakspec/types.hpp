#pragma once

#include <Eigen/Dense>

namespace cloakspec {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

}  // namespace cloakspec
