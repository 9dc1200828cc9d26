// SPDX-License-Identifier: Apache-2.0
//
// PV list file: one shared variable per line,
//
//   name,type,direction,scan,source-spec[,limits:LL;L;H;HH]
//
//   type       Double | Boolean
//   direction  input | output
//   scan       periodic:<seconds> | event
//   source     see parse_bind_spec (optional; defaults to const:0)
//   limits     optional; all four thresholds, enabled
//
// Blank lines and '#' comments are ignored.

#ifndef PVMW_PVLIST_HPP_
#define PVMW_PVLIST_HPP_

#include <optional>
#include <string>
#include <vector>

#include "pvcore.hpp"
#include "signals.hpp"

namespace pvmw {

struct PvEntry {
  std::string name;
  PublishedType type = PublishedType::kDouble;
  Direction direction = Direction::kInput;
  ScanSpec scan;
  BindSpec source;
  std::optional<AlarmLimits> limits;
};

ScanSpec parse_scan_spec(const std::string& text);
std::string format_scan_spec(const ScanSpec& scan);

PvEntry parse_pvlist_line(const std::string& line);
std::string format_pvlist_line(const PvEntry& e);

/// Parses a whole PV list; duplicate names are rejected here.
std::vector<PvEntry> parse_pvlist(const std::string& text);
std::vector<PvEntry> load_pvlist_file(const std::string& path);

std::string format_pvlist(const std::vector<PvEntry>& entries);

}  // namespace pvmw

#endif  // PVMW_PVLIST_HPP_
