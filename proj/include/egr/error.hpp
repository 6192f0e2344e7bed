#ifndef EGR_ERROR_HPP
#define EGR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace egr {

enum class Errc {
  DisconnectedGraph,
  DuplicateEdge,
  SelfLoop,
  BadIndex,
  NegativePhi,
  LengthMismatch,
  UnknownFamily,
  BadParam,
  NoConvergence,
  NotPositiveDefinite,
  EmptyEigenspace,
  InfeasibleRefinement,
  DimensionMismatch,
  InfeasibleInput,
  Infeasible,
  IoError,
};

const char* errc_name(Errc c);

/// Library-wide exception type; carries a machine-readable code plus context.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace egr

#endif
