#pragma once

#include <stdexcept>
#include <string>

namespace overlap {

/// Base class for errors caused by bad input data (as opposed to usage errors,
/// which surface as std::invalid_argument from parameter validation).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorpusError : public DataError {
 public:
  using DataError::DataError;
};

class IndexError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace overlap
