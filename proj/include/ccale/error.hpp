#ifndef CCALE_ERROR_HPP
#define CCALE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ccale {

enum class ErrorKind {
  invalid_cell,
  degenerate_edge,
  singular_node,
  positivity,
  tangling,
  coverage,
  stagnation,
  out_of_range,
  config,
  io,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::invalid_cell: return "invalid-cell";
    case ErrorKind::degenerate_edge: return "degenerate-edge";
    case ErrorKind::singular_node: return "singular-node";
    case ErrorKind::positivity: return "positivity";
    case ErrorKind::tangling: return "tangling";
    case ErrorKind::coverage: return "coverage";
    case ErrorKind::stagnation: return "stagnation";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

/// Fatal condition raised by any phase. `index` is the offending cell or node id, -1 if none.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, long index = -1)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what +
                           (index >= 0 ? " (id " + std::to_string(index) + ")" : "")),
        kind_(kind),
        index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  long index() const noexcept { return index_; }

 private:
  ErrorKind kind_;
  long index_;
};

}  // namespace ccale

#endif  // CCALE_ERROR_HPP
