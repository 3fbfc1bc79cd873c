#pragma once

#include <stdexcept>
#include <string>

namespace qfoundry {

/// Bad input: a value outside its domain, a malformed parameter, a broken invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A hidden-variable model was asked for settings where its construction does not exist.
class ModelInconsistent : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A Fock-space operation would need photon numbers beyond the truncation.
class TruncationOverflow : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A discretized computation is not converged on the requested grid.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qfoundry
