#pragma once

#include <stdexcept>
#include <string>

namespace sgff {

// Thrown when an input violates a documented precondition.
class domain_error : public std::domain_error {
 public:
  explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// Thrown when an integrand misbehaves at a quadrature node or a tail
// window is too small for the requested accuracy.
class evaluation_error : public std::runtime_error {
 public:
  explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a factorization or determinant is not usable
// (singular pivot, negative or non-real determinant).
class conditioning_error : public std::runtime_error {
 public:
  explicit conditioning_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when extracted data is inconsistent with the model being checked
// (e.g. a Laplacian outside the admissible range).
class consistency_error : public std::runtime_error {
 public:
  explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sgff
