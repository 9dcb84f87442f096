#ifndef CURVSTAB_HARNESS_HPP
#define CURVSTAB_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "curvstab/geometry.hpp"
#include "curvstab/spectral.hpp"

namespace curvstab {

struct VerificationReport {
  std::string case_id;
  double predicted = 0.0;
  std::string predicted_from;
  double oracle = 0.0;
  double fd_error = 0.0;
  double discrepancy = 0.0;  // relative, |p - o| / max(|p|, |o|, 1)
  enum class Verdict { Confirmed, Refuted, Inconclusive } verdict = Verdict::Inconclusive;
  std::vector<std::string> notes;
};

std::string to_string(VerificationReport::Verdict v);

// Verdict ladder: Confirmed iff discrepancy <= max(1e-5, 10 x fd error);
// Refuted iff discrepancy > 100 x that bound; Inconclusive between.
VerificationReport::Verdict ladder(double discrepancy, double fd_error);

// Built-in comparison cases; `include_adjudication` adds the case that probes
// the conflicting in-text expansion and is expected to come out Refuted.
std::vector<std::string> builtin_cases(bool include_adjudication = false);

VerificationReport verify_case(const std::string& case_id);

// Radius sweeps with several zonal harmonics; fits the (mu, lambda)
// coefficients of the conformal forms and compares with the closed-form
// coefficients.
std::vector<VerificationReport> continuation_suite(const std::vector<double>& radii = {1.0, 1.3,
                                                                                       1.7});

// Algebraic identity suites over random admissible spectral data.
std::vector<VerificationReport> consistency_suite(int samples = 100, std::uint64_t seed = 20240817);

} // namespace curvstab

#endif
