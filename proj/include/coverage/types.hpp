#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace coverage {

using Point = Eigen::Vector2d;
using Positions = std::vector<Point>;

/// Raised for arguments outside an operation's contract.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace coverage
