#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gnar/network.hpp"
#include "gnar/series.hpp"

namespace gnar {

/// Fatal input problem, with the offending file and line when known.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& file, std::size_t line, const std::string& reason);
  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

struct RowError {
  std::size_t line = 0;
  std::string reason;
};

struct QualityFlag {
  std::string fips;
  std::string kind;  // self_flow, zero_flow, unallocated, non_monotone, duplicate, ...
};

/// JSON shape: {file, row_errors: [{line, reason}], flags: [{fips, kind}]}
struct DataQualityReport {
  std::string file;
  std::vector<RowError> row_errors;
  std::vector<QualityFlag> flags;

  nlohmann::json to_json() const;
};

struct FlowRecord {
  NodeId from;
  NodeId to;
  std::uint64_t commuters = 0;
  std::size_t line = 0;

  bool self_flow() const noexcept { return from == to; }
};

struct FlowParseResult {
  std::vector<FlowRecord> records;
  DataQualityReport report;
};

/// CSV with header `from_fips,to_fips,commuters`. Every data line becomes
/// either a record or a row error; a missing header is fatal.
FlowParseResult parse_flows(std::istream& in, const std::string& name = "<stream>");
FlowParseResult parse_flows(const std::filesystem::path& path);

struct NetworkBuild {
  CountyNetwork network;
  std::vector<std::string> warnings;
};

/// One directed edge per (from, to) pair with mu = summed commuters. Node
/// order is ascending by id. Self-flows and zero-count pairs add no edge.
/// Throws std::invalid_argument on an empty record list.
NetworkBuild build_network_from_flows(const std::vector<FlowRecord>& records,
                                      const std::map<NodeId, NodeAttrs>& node_attrs = {});

/// CSV `fips,lat,lon` of node centroids, keyed by normalised id.
std::map<NodeId, NodeAttrs> parse_centroids(const std::filesystem::path& path);

struct CaseRow {
  NodeId fips;
  std::string county_name;
  std::string state;
  std::string state_fips;
  std::vector<double> counts;  // one per date, cumulative
};

struct CaseTable {
  std::vector<Date> dates;
  std::vector<CaseRow> rows;
  DataQualityReport report;

  std::size_t days() const noexcept { return dates.size(); }
};

/// USAFacts layout: `countyFIPS,County Name,State,StateFIPS,<dates...>` with
/// dates as yyyy-mm-dd or m/d/yy. Ragged rows, bad dates or a date axis that
/// does not advance one day per column throw InputError. Non-monotone
/// cumulative rows, unallocated (FIPS 0) rows and non-integer or negative
/// counts are kept and flagged.
CaseTable parse_cases(std::istream& in, const std::string& name = "<stream>");
CaseTable parse_cases(const std::filesystem::path& path);

struct Panel {
  NetworkTimeSeries series;
  std::vector<NodeId> missing;  // zero-filled network nodes absent from the table
};

/// Columns follow network order. Table rows without a network node (FIPS 0
/// among them) are ignored.
Panel to_panel(const CaseTable& table, const CountyNetwork& net);

/// Keeps rows 0, 7, 14, ... of a daily cumulative series; a trailing partial
/// week is dropped. Throws std::invalid_argument for T < 7 or non-daily input.
NetworkTimeSeries aggregate_weekly(const NetworkTimeSeries& daily);

/// Two-digit state FIPS for a postal abbreviation ("RI" -> "44"). Numeric
/// codes pass through zero-padded. Throws std::invalid_argument if unknown.
std::string state_fips_code(std::string_view state);

/// Postal abbreviation for a two-digit state FIPS code, or the code itself.
std::string state_abbreviation(std::string_view fips);

/// yyyy-mm-dd or m/d/yy(yy); nullopt when malformed or not a calendar date.
std::optional<Date> parse_date(std::string_view text);

/// Splits one CSV line, honouring double quotes.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace gnar
