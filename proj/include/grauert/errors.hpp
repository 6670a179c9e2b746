#pragma once

#include <stdexcept>
#include <string>

namespace grauert {

enum class errc {
  invalid_argument,
  truncation,
  out_of_tube,
  unsupported,
  invalid_contour,
  no_parametrix,
  certificate,
  divergence,
  io,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
  errc code() const noexcept { return code_; }
  // process exit code used by the command-line front end
  int exit_code() const noexcept;

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw Error(c, msg); }

inline void require(bool ok, errc c, const std::string& msg) {
  if (!ok) fail(c, msg);
}

}  // namespace grauert
