#ifndef ISOFORM_ERROR_HPP_
#define ISOFORM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace isoform {

// Failure categories, aligned with the CLI exit codes:
// parse -> 2, convergence -> 3, construction/precondition -> 4, hypothesis -> 5.
enum class ErrorKind {
  parse,
  convergence,
  construction,
  precondition,
  hypothesis,
  invalid_argument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  int exit_code() const noexcept {
    switch (kind_) {
      case ErrorKind::parse:
        return 2;
      case ErrorKind::convergence:
        return 3;
      case ErrorKind::construction:
      case ErrorKind::precondition:
      case ErrorKind::invalid_argument:
        return 4;
      case ErrorKind::hypothesis:
        return 5;
    }
    return 1;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_error(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace isoform

#endif  // ISOFORM_ERROR_HPP_
