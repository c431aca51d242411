#pragma once

// Helpers shared by the suite implementations.

#include "anisospec/solver.hpp"
#include "anisospec/verify.hpp"

#include <chrono>
#include <functional>
#include <string>
#include <vector>

namespace anisospec::detail {

std::string num(double v);  // 17 significant digits
SolverOptions solver_options(const VerifyConfig& cfg);
/// max(relative floor·|reference|, factor·error_estimate).
double fem_tolerance(double reference, const SpectralResult& fem, const VerifyConfig& cfg);
std::string anis_json(const Anisotropy& h);
/// "name:p1,p2" as taken by the CLI's --gen.
std::string gen_arg(const ShapeSpec& s);
/// Runs fill, recording an exception as the case error, then judges.
CaseResult guarded(CaseResult c, const std::function<void(CaseResult&)>& fill);
Anisotropy unit_norm(const Anisotropy& h);
VerificationReport finish(std::string suite, std::vector<CaseResult> cases,
                          std::chrono::steady_clock::time_point start);

}  // namespace anisospec::detail
