#pragma once

#include <string>

#include "ctfb/analysis.hpp"

namespace ctfb {

/// Human-readable certificate summary.
std::string report_text(const CertificateReport& report);

/// Machine-readable rows: kind,name,value,checked,violations,tolerance,status
std::string report_csv(const CertificateReport& report);

}  // namespace ctfb
