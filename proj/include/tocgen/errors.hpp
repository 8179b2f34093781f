#pragma once

#include <stdexcept>
#include <string>

namespace tocgen {

/// Malformed input file (layout XML/JSON, TOC JSON, config).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Semantically invalid data: broken invariants, empty corpora, bad labels.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model bundle incompatible with this build (container version, feature layout).
class ModelVersionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tocgen
