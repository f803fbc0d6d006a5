#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace heis {

enum class LedgerStatus { Corrected, Confirmed, Unused, Flagged };

/// One place where a reference formula was checked against the canonical
/// Pontryagin system and the RK4 oracle.
struct LedgerEntry {
  std::string_view id;
  /// Extremal families (or module areas) whose code path uses the entry.
  std::vector<std::string_view> families;
  LedgerStatus status;
  std::string_view reference;
  std::string_view adopted;
  std::string_view evidence;
};

std::span<const LedgerEntry> discrepancy_ledger();

/// Entries whose `families` contain `family`, e.g. "p2-normal".
std::vector<LedgerEntry> ledger_entries_for(std::string_view family);

std::string to_string(LedgerStatus status);

nlohmann::ordered_json to_json(const LedgerEntry& entry);
nlohmann::ordered_json ledger_json();

}  // namespace heis
