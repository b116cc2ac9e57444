#pragma once

#include <stdexcept>
#include <string>

namespace spinekit {

// Precondition or shape violation by the caller (degree overflow, dimension
// mismatch, wrong blade degree, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A configured budget (term count, blade count, memory) would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A moment lookup fell outside the provider's valid range.
class RangeError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

// A persisted table failed its digest or schema check.
class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spinekit
