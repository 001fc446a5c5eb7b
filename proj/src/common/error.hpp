#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace argpair {

// Error categories map 1:1 onto C API status codes and CLI exit codes.
enum class ErrKind : int {
  internal = 1,
  config = 2,
  data = 3,
  numeric = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrKind kind() const { return kind_; }

 private:
  ErrKind kind_;
};

inline Error config_error(const std::string& msg) { return Error(ErrKind::config, msg); }
inline Error data_error(const std::string& msg) { return Error(ErrKind::data, msg); }
inline Error numeric_error(const std::string& msg) { return Error(ErrKind::numeric, msg); }
inline Error internal_error(const std::string& msg) { return Error(ErrKind::internal, msg); }

// Thrown when an operation is handed arrays whose shapes do not close.
class ShapeError : public Error {
 public:
  ShapeError(std::string op, std::vector<int> lhs, std::vector<int> rhs)
      : Error(ErrKind::internal, format(op, lhs, rhs)),
        op_(std::move(op)),
        lhs_(std::move(lhs)),
        rhs_(std::move(rhs)) {}

  const std::string& op() const { return op_; }
  const std::vector<int>& lhs() const { return lhs_; }
  const std::vector<int>& rhs() const { return rhs_; }

  static std::string shape_str(const std::vector<int>& s) {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < s.size(); ++i) {
      if (i) os << 'x';
      os << s[i];
    }
    os << ']';
    return os.str();
  }

 private:
  static std::string format(const std::string& op, const std::vector<int>& a,
                            const std::vector<int>& b) {
    std::ostringstream os;
    os << op << ": shape mismatch " << shape_str(a) << " vs " << shape_str(b);
    return os.str();
  }

  std::string op_;
  std::vector<int> lhs_;
  std::vector<int> rhs_;
};

}  // namespace argpair
