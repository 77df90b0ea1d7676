#include "lambek/audit.hpp"

#include <atomic>
#include <mutex>

#include "lambek/group_word.hpp"

namespace lambek {

namespace {

std::atomic<bool> g_enabled{false};
std::mutex g_mu;
AuditStats g_stats;

bool in_group_fragment(const Sequent& s) {
  if (!s.succedent.fg_defined()) return false;
  for (auto f : s.antecedent)
    if (!f.fg_defined()) return false;
  return true;
}

}  // namespace

void set_audit_enabled(bool on) { g_enabled = on; }
bool audit_enabled() { return g_enabled; }

void audit_reset() {
  std::lock_guard lock(g_mu);
  g_stats = {};
}

AuditStats audit_stats() {
  std::lock_guard lock(g_mu);
  return g_stats;
}

void audit_derivation(const DerivationPtr& d, bool lambek_restriction) {
  if (!g_enabled || !d) return;
  bool ok = check_derivation(d, {lambek_restriction});
  bool fg_checked = in_group_fragment(d->conclusion);
  bool fg_ok = true;
  if (fg_checked) fg_ok = fg_interp(d->conclusion.antecedent) == fg_interp(d->conclusion.succedent);

  std::lock_guard lock(g_mu);
  ++g_stats.derivations;
  if (!ok) ++g_stats.check_failures;
  if (fg_checked) ++g_stats.fg_checked;
  if (!fg_ok) ++g_stats.fg_violations;
  if ((!ok || !fg_ok) && g_stats.failures.size() < 16) {
    g_stats.failures.push_back(std::string(!ok ? "check: " : "fg: ") + render_sequent(d->conclusion));
  }
}

}  // namespace lambek
