#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace plfit {

// Argument outside the mathematical domain of a model or fitter
// (d < 1 m, non-positive frequency, too few samples, empty grid).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Input text does not follow the dataset or config schema.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The design matrix of a least-squares fit is rank deficient.
class SingularDesignError : public std::runtime_error {
 public:
  SingularDesignError(std::string column, const std::string& what)
      : std::runtime_error(what), column_(std::move(column)) {}

  // Name of the column (dataset field) responsible for the deficiency.
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

}  // namespace plfit
