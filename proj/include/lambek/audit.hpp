#pragma once

// Process-wide audit of emitted derivations. When enabled, every derivation
// handed out by the provers, the join engine and the star engine is run
// through check_derivation, and sequents in the ., \, /, 1 fragment are
// checked against the free-group necessity condition.

#include <cstddef>
#include <string>
#include <vector>

#include "lambek/derivation.hpp"

namespace lambek {

struct AuditStats {
  std::size_t derivations = 0;
  std::size_t check_failures = 0;
  std::size_t fg_checked = 0;
  std::size_t fg_violations = 0;
  /// First few offending sequents, rendered.
  std::vector<std::string> failures;
};

void set_audit_enabled(bool on);
bool audit_enabled();
void audit_reset();
AuditStats audit_stats();

/// Records one emitted derivation. No-op when auditing is disabled.
void audit_derivation(const DerivationPtr& d, bool lambek_restriction = false);

}  // namespace lambek
