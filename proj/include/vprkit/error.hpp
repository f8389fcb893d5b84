#pragma once

#include <stdexcept>
#include <string>

namespace vprkit {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// imaging
class IoError : public Error {
 public:
  using Error::Error;
};
class FormatError : public Error {
 public:
  using Error::Error;
};

// descriptors
class ImageTooSmall : public Error {
 public:
  using Error::Error;
};

// matching
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};
class EmptyDescriptor : public Error {
 public:
  using Error::Error;
};
class KindMismatch : public Error {
 public:
  using Error::Error;
};
class EmptyMap : public Error {
 public:
  using Error::Error;
};

// datasets
class LayoutError : public Error {
 public:
  using Error::Error;
};
class GroundTruthError : public Error {
 public:
  using Error::Error;
};

// evaluation
class EmptyGroup : public Error {
 public:
  using Error::Error;
};
class ZeroTime : public Error {
 public:
  using Error::Error;
};

}  // namespace vprkit
