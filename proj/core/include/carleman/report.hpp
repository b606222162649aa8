#ifndef CARLEMAN_REPORT_HPP
#define CARLEMAN_REPORT_HPP

#include <string>

#include "carleman/constants.hpp"
#include "carleman/harness.hpp"

namespace carleman {

/// "%.17g" — shortest exact round-trip we ship; reports must be byte-stable.
std::string format_double(double v);

std::string constants_text(const ConstantsReport& rep);
std::string constants_json(const ConstantsReport& rep);
std::string constants_csv(const ConstantsReport& rep);  // flat key,value records

std::string report_text(const VerificationReport& rep);
std::string report_json(const VerificationReport& rep);

/// columns: alpha, lhs_grad, lhs_u, rhs, ratio (extended scientific notation)
std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace carleman

#endif
