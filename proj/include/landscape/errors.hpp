#pragma once

#include <stdexcept>
#include <string>

namespace landscape {

// Conditional variance in the LRC conditioning formulas is nonpositive.
class DegenerateConditioning : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A closed form was requested outside the regime where it holds.
class UnsupportedRegime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IllConditionedCovariance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SearchFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadrature grid does not cover the region the integrand needs.
class GridCoverageError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace landscape
