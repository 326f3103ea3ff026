#pragma once

#include <stdexcept>
#include <string>

namespace untangle {

enum class ErrorKind {
  geometry,      // predicate called outside its domain
  load,          // malformed or invalid instance document
  flip,          // flip rejected by the model
  precondition,  // strategy or lemma precondition not met
  io,
};

class UntangleError : public std::runtime_error {
 public:
  UntangleError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw UntangleError(kind, what);
}

}  // namespace untangle
