#ifndef CTXLAB_ERRORS_HPP
#define CTXLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ctxlab {

// Error categories shared by all engines. The CLI maps these to exit codes,
// so every throw site picks the category deliberately.
enum class errc {
  shape,            // non-square / mismatched dimensions
  size_limit,       // desk-scale cap exceeded
  conservation,     // photon number not conserved
  tie,              // exact lambda tie (measure-zero, never broken silently)
  unsupported_law,  // lambda law outside the supported family
  coverage,         // assignment missing an observable
  missing_context,  // behavior has no table for the requested context
  validation,       // schema or invariant violation
  internal,         // broken internal consistency (a bug, not bad input)
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::shape: return "shape";
    case errc::size_limit: return "size-limit";
    case errc::conservation: return "conservation";
    case errc::tie: return "tie";
    case errc::unsupported_law: return "unsupported-law";
    case errc::coverage: return "coverage";
    case errc::missing_context: return "missing-context";
    case errc::validation: return "validation";
    case errc::internal: return "internal";
  }
  return "unknown";
}

}  // namespace ctxlab

#endif
