// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace bendbeam {

/// A physical or geometric precondition was violated (negative radicand,
/// non-positive frequency, empty window, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Scenario configuration failed validation. `path()` names the offending key
/// as a JSON pointer.
class ValidationError : public std::runtime_error {
public:
  ValidationError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

/// A computation would exceed the configured memory cap.
class ResourceError : public std::runtime_error {
public:
  ResourceError(const std::string& what, std::size_t required_bytes, std::size_t cap_bytes)
      : std::runtime_error(what), required_(required_bytes), cap_(cap_bytes) {}

  std::size_t required_bytes() const noexcept { return required_; }
  std::size_t cap_bytes() const noexcept { return cap_; }

private:
  std::size_t required_;
  std::size_t cap_;
};

}  // namespace bendbeam
