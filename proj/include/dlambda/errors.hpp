#pragma once

#include <stdexcept>
#include <string>

namespace dlambda {

/// Raised when an input lies outside the physical domain of an operation
/// (negative optical depth, non-positive rates, active transfer matrices, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a Fock cutoff cannot hold the photon content a channel
/// would produce. Input content is never truncated silently.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace dlambda
