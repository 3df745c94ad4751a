#pragma once
/// Exception type shared by every module. The kind lets callers (the CLI in
/// particular) map failures onto exit codes without parsing messages.

#include <stdexcept>
#include <string>

namespace yy {

enum class ErrorKind {
  InvalidArgument,  // violated construction invariant / bad parameter
  Shape,            // field / grid mismatch
  OutOfDomain,      // point outside a chart box
  PoleAmbiguity,    // longitude undefined at the sibling pole
  Singular,         // tridiagonal / Schur pivot breakdown
  OverlapTooSmall,  // exchange stencil would leave the donor's admissible block
  NonConvergence,
  Sequencing,       // Gauss-Seidel predecessor missing
  DegenerateFit,
  Config,
  Format,
  Io,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace yy
