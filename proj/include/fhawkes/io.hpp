#pragma once

#include <string>

#include <json.hpp>

#include "fhawkes/simulate.hpp"

namespace fhawkes {

/// Writes `time,mark` CSV; times in fixed-point decimal with 9 fractional
/// digits, marks 1-based.
void write_events_csv(const std::string& path, const EventLog& log);

/// Reads an event CSV. The horizon is not stored in the CSV itself and must
/// be supplied (usually from the manifest). dim <= 0 means "infer from the
/// largest mark". Times must be strictly increasing as stored; throws
/// EventParseError (with the offending line) on malformed or unsorted input.
EventLog read_events_csv(const std::string& path, double horizon, int dim = 0);

void write_manifest(const std::string& path, const nlohmann::json& manifest);
nlohmann::json read_manifest(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace fhawkes
