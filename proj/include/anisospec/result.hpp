#pragma once

#include <string>

namespace anisospec {

struct SpectralResult {
  double value = 0.0;
  std::string method;  // "closed_form" or "fem"
  double p = 2.0;
  double error_estimate = 0.0;
  std::string provenance;
  bool converged = true;
};

}  // namespace anisospec
