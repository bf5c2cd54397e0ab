#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ewls {

class SchemaError : public std::invalid_argument {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : std::invalid_argument(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class ValueError : public std::invalid_argument {
 public:
  ValueError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class IncommensurateIntervals : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotAPowerOfTwo : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SpaceMismatch : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InfeasibleMatching : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::size_t count)
      : std::runtime_error("guess budget exceeded: " + std::to_string(count)),
        count_(count) {}
  std::size_t count() const { return count_; }

 private:
  std::size_t count_;
};

class StateSpaceExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SearchSpaceExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ewls
