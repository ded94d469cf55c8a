#pragma once

#include <stdexcept>
#include <string>

namespace octwalk {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A point was constructed on or outside the unit circle.
class InvalidPoint : public Error {
public:
  using Error::Error;
};

/// (a, alpha) lies outside the region where the symmetric octagon exists.
class InadmissibleModule : public Error {
public:
  using Error::Error;
};

class GenerationBudgetExceeded : public Error {
public:
  using Error::Error;
};

/// A word contains an immediate backtrack (|i_t - i_{t-1}| = 4).
class ForbiddenWord : public Error {
public:
  using Error::Error;
};

class DegenerateVariance : public Error {
public:
  using Error::Error;
};

class SingularRadius : public Error {
public:
  using Error::Error;
};

} // namespace octwalk
