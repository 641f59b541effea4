#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace jumppot {

// Bad argument or an argument outside the admissible range.
class invalid_parameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Point outside the domain of a function (e.g. z_d <= -1 for profiles on H_{-1}).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class quadrature_failure : public std::runtime_error {
 public:
  quadrature_failure(const std::string& what, double partial, double error_estimate)
      : std::runtime_error(format(what, partial, error_estimate)),
        partial_(partial),
        error_(error_estimate) {}
  double partial() const { return partial_; }
  double error_estimate() const { return error_; }

 private:
  static std::string format(const std::string& what, double partial, double err) {
    char buf[96];
    std::snprintf(buf, sizeof buf, " (partial=%.6g, err=%.3g)", partial, err);
    return what + buf;
  }
  double partial_;
  double error_;
};

class geometry_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class unsupported_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw invalid_parameter(msg);
}

}  // namespace jumppot
