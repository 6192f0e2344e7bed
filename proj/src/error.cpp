#include "egr/error.hpp"

namespace egr {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DisconnectedGraph: return "DisconnectedGraph";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::BadIndex: return "BadIndex";
    case Errc::NegativePhi: return "NegativePhi";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::UnknownFamily: return "UnknownFamily";
    case Errc::BadParam: return "BadParam";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::EmptyEigenspace: return "EmptyEigenspace";
    case Errc::InfeasibleRefinement: return "InfeasibleRefinement";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InfeasibleInput: return "InfeasibleInput";
    case Errc::Infeasible: return "Infeasible";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace egr
