#pragma once

#include <stdexcept>
#include <string>

namespace barely {

/// Malformed arguments or violated preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A search that legitimately found nothing (e.g. no sunflower of the requested size).
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The data contradicts a structural law it is expected to satisfy,
/// e.g. a limit triple with three distinct points.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace barely
