#pragma once

#include <stdexcept>
#include <string>

namespace cshmm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamError : Error {
  using Error::Error;
};

struct AlphabetError : Error {
  using Error::Error;
};

struct NormalizationError : Error {
  NormalizationError(const std::string& key, double sum)
      : Error("edge probabilities at state " + key + " sum to " +
              std::to_string(sum)),
        state(key),
        probability_sum(sum) {}
  std::string state;
  double probability_sum;
};

struct DuplicateEdgeError : Error {
  using Error::Error;
};

struct UnifilarityError : Error {
  using Error::Error;
};

struct ZeroProbabilityError : Error {
  using Error::Error;
};

struct BudgetError : Error {
  using Error::Error;
};

struct InsufficientDataError : Error {
  using Error::Error;
};

}  // namespace cshmm
