#include "ipapprox/result.hpp"

namespace ipapprox {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Solved:
      return "Solved";
    case Status::NearFeasibilityUnattainable:
      return "NearFeasibilityUnattainable";
    case Status::Infeasible:
      return "Infeasible";
  }
  return "Unknown";
}

}  // namespace ipapprox
