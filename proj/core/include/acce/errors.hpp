#pragma once

#include <stdexcept>
#include <string>

namespace acce {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// File was readable but its contents are not a supported encoding.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A caller violated a documented precondition (mismatched sizes, bad parameter).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace acce
