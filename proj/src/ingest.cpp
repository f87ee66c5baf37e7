#include "gnar/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <utility>

namespace gnar {

InputError::InputError(const std::string& file, std::size_t line, const std::string& reason)
    : std::runtime_error(file + (line ? ":" + std::to_string(line) : std::string()) + ": " + reason),
      file_(file),
      line_(line) {}

nlohmann::json DataQualityReport::to_json() const {
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& e : row_errors) errors.push_back({{"line", e.line}, {"reason", e.reason}});
  nlohmann::json flag_list = nlohmann::json::array();
  for (const auto& f : flags) flag_list.push_back({{"fips", f.fips}, {"kind", f.kind}});
  return {{"file", file}, {"row_errors", std::move(errors)}, {"flags", std::move(flag_list)}};
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        fields.back() += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Strips a UTF-8 BOM and trailing CR.
void clean_line(std::string& line, bool first) {
  if (first && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* begin = t.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string(), 0, "cannot open file");
  return in;
}

}  // namespace

std::optional<Date> parse_date(std::string_view raw) {
  const std::string text = trim(raw);
  int y = 0;
  unsigned m = 0, d = 0;
  auto num = [](std::string_view s, auto& v) { return !s.empty() && parse_number(s, v); };
  if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
    if (!num(std::string_view(text).substr(0, 4), y) || !num(std::string_view(text).substr(5, 2), m) ||
        !num(std::string_view(text).substr(8, 2), d)) {
      return std::nullopt;
    }
  } else {
    const auto a = text.find('/');
    const auto b = text.find('/', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos) return std::nullopt;
    const std::string_view v(text);
    if (!num(v.substr(0, a), m) || !num(v.substr(a + 1, b - a - 1), d) || !num(v.substr(b + 1), y)) {
      return std::nullopt;
    }
    if (v.substr(b + 1).size() == 2) y += 2000;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

FlowParseResult parse_flows(std::istream& in, const std::string& name) {
  FlowParseResult out;
  out.report.file = name;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    clean_line(line, line_no == 1);
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    for (auto& f : fields) f = trim(f);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"from_fips", "to_fips", "commuters"}) {
        throw InputError(name, line_no, "expected header 'from_fips,to_fips,commuters'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) {
      out.report.row_errors.push_back({line_no, "expected 3 fields, got " + std::to_string(fields.size())});
      continue;
    }
    FlowRecord rec;
    rec.line = line_no;
    try {
      rec.from = NodeId::normalize(fields[0]);
      rec.to = NodeId::normalize(fields[1]);
    } catch (const std::invalid_argument& e) {
      out.report.row_errors.push_back({line_no, e.what()});
      continue;
    }
    long long count = 0;
    if (!parse_number(fields[2], count)) {
      out.report.row_errors.push_back({line_no, "non-numeric commuters '" + fields[2] + "'"});
      continue;
    }
    if (count < 0) {
      out.report.row_errors.push_back({line_no, "negative commuters " + fields[2]});
      continue;
    }
    rec.commuters = static_cast<std::uint64_t>(count);
    if (rec.self_flow()) out.report.flags.push_back({rec.from.code(), "self_flow"});
    out.records.push_back(std::move(rec));
  }
  if (!header_seen) throw InputError(name, 0, "missing header 'from_fips,to_fips,commuters'");
  return out;
}

FlowParseResult parse_flows(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_flows(in, path.string());
}

NetworkBuild build_network_from_flows(const std::vector<FlowRecord>& records,
                                      const std::map<NodeId, NodeAttrs>& node_attrs) {
  if (records.empty()) throw std::invalid_argument("cannot build a network from zero flow records");

  std::set<NodeId> ids;
  std::map<std::pair<NodeId, NodeId>, std::uint64_t> totals;
  for (const auto& r : records) {
    ids.insert(r.from);
    ids.insert(r.to);
    if (!r.self_flow()) totals[{r.from, r.to}] += r.commuters;
  }

  NetworkBuild out;
  std::vector<NodeId> nodes(ids.begin(), ids.end());
  std::vector<NodeAttrs> attrs;
  attrs.reserve(nodes.size());
  std::size_t missing = 0;
  for (const auto& id : nodes) {
    auto it = node_attrs.find(id);
    if (it == node_attrs.end()) {
      ++missing;
      attrs.push_back(NodeAttrs{std::nullopt, std::nullopt, id.state(), false});
    } else {
      attrs.push_back(it->second);
    }
  }
  if (missing > 0) {
    out.warnings.push_back(std::to_string(missing) +
                           " nodes have no centroid; great-circle weighting will fail for them");
  }

  std::vector<EdgeSpec> edges;
  for (const auto& [key, count] : totals) {
    if (count == 0) continue;
    const auto c = static_cast<double>(count);
    edges.push_back(EdgeSpec{key.first, key.second, c, c});
  }
  out.network = CountyNetwork(std::move(nodes), std::move(attrs), edges, WeightMode::commuters);
  return out;
}

std::map<NodeId, NodeAttrs> parse_centroids(const std::filesystem::path& path) {
  auto in = open(path);
  std::map<NodeId, NodeAttrs> out;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    clean_line(line, line_no == 1);
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    for (auto& f : fields) f = trim(f);
    if (!header_seen) {
      if (fields.size() < 3 || fields[0] != "fips" || fields[1] != "lat" || fields[2] != "lon") {
        throw InputError(path.string(), line_no, "expected header 'fips,lat,lon'");
      }
      header_seen = true;
      continue;
    }
    double lat = 0.0, lon = 0.0;
    if (fields.size() < 3 || !parse_number(fields[1], lat) || !parse_number(fields[2], lon)) {
      throw InputError(path.string(), line_no, "malformed centroid row");
    }
    NodeId id;
    try {
      id = NodeId::normalize(fields[0]);
    } catch (const std::invalid_argument& e) {
      throw InputError(path.string(), line_no, e.what());
    }
    out[id] = NodeAttrs{lat, lon, id.state(), false};
  }
  return out;
}

CaseTable parse_cases(std::istream& in, const std::string& name) {
  CaseTable table;
  table.report.file = name;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  std::set<NodeId> seen;
  while (std::getline(in, line)) {
    ++line_no;
    clean_line(line, line_no == 1);
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    for (auto& f : fields) f = trim(f);

    if (width == 0) {
      static const std::array<const char*, 4> expected{"countyFIPS", "County Name", "State",
                                                       "StateFIPS"};
      if (fields.size() < 4 ||
          !std::equal(expected.begin(), expected.end(), fields.begin())) {
        throw InputError(name, line_no,
                         "expected header 'countyFIPS,County Name,State,StateFIPS,<dates...>'");
      }
      for (std::size_t k = 4; k < fields.size(); ++k) {
        const auto d = parse_date(fields[k]);
        if (!d) throw InputError(name, line_no, "unparseable date '" + fields[k] + "'");
        if (!table.dates.empty() && *d != table.dates.back() + std::chrono::days{1}) {
          throw InputError(name, line_no,
                           *d <= table.dates.back()
                               ? "date axis is not increasing at '" + fields[k] + "'"
                               : "date axis skips days at '" + fields[k] + "'");
        }
        table.dates.push_back(*d);
      }
      if (table.dates.empty()) throw InputError(name, line_no, "no date columns");
      width = fields.size();
      continue;
    }

    if (fields.size() != width) {
      throw InputError(name, line_no, "ragged row: expected " + std::to_string(width) +
                                          " fields, got " + std::to_string(fields.size()));
    }
    CaseRow row;
    try {
      row.fips = NodeId::normalize(fields[0]);
    } catch (const std::invalid_argument& e) {
      throw InputError(name, line_no, e.what());
    }
    row.county_name = fields[1];
    row.state = fields[2];
    row.state_fips = fields[3];
    row.counts.reserve(table.dates.size());
    bool negative = false, fractional = false, non_monotone = false;
    for (std::size_t k = 4; k < fields.size(); ++k) {
      double v = 0.0;
      if (!parse_number(fields[k], v) || !std::isfinite(v)) {
        throw InputError(name, line_no, "non-numeric count '" + fields[k] + "'");
      }
      negative |= v < 0.0;
      fractional |= v != std::floor(v);
      non_monotone |= !row.counts.empty() && v < row.counts.back();
      row.counts.push_back(v);
    }
    const std::string& code = row.fips.code();
    if (row.fips.is_unallocated()) table.report.flags.push_back({code, "unallocated"});
    if (negative) table.report.flags.push_back({code, "negative_count"});
    if (fractional) table.report.flags.push_back({code, "non_integer_count"});
    if (non_monotone) table.report.flags.push_back({code, "non_monotone"});
    if (!row.fips.is_unallocated() && !seen.insert(row.fips).second) {
      table.report.flags.push_back({code, "duplicate"});
      continue;
    }
    table.rows.push_back(std::move(row));
  }
  if (width == 0) throw InputError(name, 0, "missing header");
  return table;
}

CaseTable parse_cases(const std::filesystem::path& path) {
  auto in = open(path);
  return parse_cases(in, path.string());
}

Panel to_panel(const CaseTable& table, const CountyNetwork& net) {
  if (table.dates.empty()) throw std::invalid_argument("case table has no dates");
  const auto steps = static_cast<Eigen::Index>(table.dates.size());
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(steps, static_cast<Eigen::Index>(net.size()));
  std::vector<char> filled(net.size(), 0);
  for (const auto& row : table.rows) {
    const auto idx = net.find(row.fips);
    if (!idx || filled[*idx]) continue;
    filled[*idx] = 1;
    for (Eigen::Index t = 0; t < steps; ++t) {
      values(t, static_cast<Eigen::Index>(*idx)) = row.counts[static_cast<std::size_t>(t)];
    }
  }
  Panel out{NetworkTimeSeries(std::move(values), Frequency::daily, table.dates.front()), {}};
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (!filled[i]) out.missing.push_back(net.node(i));
  }
  return out;
}

NetworkTimeSeries aggregate_weekly(const NetworkTimeSeries& daily) {
  if (daily.frequency() != Frequency::daily) {
    throw std::invalid_argument("weekly aggregation needs a daily series");
  }
  if (daily.steps() < 7) throw std::invalid_argument("weekly aggregation needs at least 7 days");
  const Eigen::Index weeks = daily.steps() / 7;
  Eigen::MatrixXd out(weeks, daily.nodes());
  for (Eigen::Index w = 0; w < weeks; ++w) out.row(w) = daily.values().row(7 * w);
  return NetworkTimeSeries(std::move(out), Frequency::weekly, daily.start_date());
}

namespace {

constexpr std::array<std::pair<const char*, const char*>, 52> kStates{{
    {"AL", "01"}, {"AK", "02"}, {"AZ", "04"}, {"AR", "05"}, {"CA", "06"}, {"CO", "08"},
    {"CT", "09"}, {"DE", "10"}, {"DC", "11"}, {"FL", "12"}, {"GA", "13"}, {"HI", "15"},
    {"ID", "16"}, {"IL", "17"}, {"IN", "18"}, {"IA", "19"}, {"KS", "20"}, {"KY", "21"},
    {"LA", "22"}, {"ME", "23"}, {"MD", "24"}, {"MA", "25"}, {"MI", "26"}, {"MN", "27"},
    {"MS", "28"}, {"MO", "29"}, {"MT", "30"}, {"NE", "31"}, {"NV", "32"}, {"NH", "33"},
    {"NJ", "34"}, {"NM", "35"}, {"NY", "36"}, {"NC", "37"}, {"ND", "38"}, {"OH", "39"},
    {"OK", "40"}, {"OR", "41"}, {"PA", "42"}, {"RI", "44"}, {"SC", "45"}, {"SD", "46"},
    {"TN", "47"}, {"TX", "48"}, {"UT", "49"}, {"VT", "50"}, {"VA", "51"}, {"WA", "53"},
    {"WV", "54"}, {"WI", "55"}, {"WY", "56"}, {"PR", "72"},
}};

}  // namespace

std::string state_fips_code(std::string_view state) {
  const std::string s = trim(state);
  if (!s.empty() && s.size() <= 2 && std::all_of(s.begin(), s.end(), ::isdigit)) {
    return std::string(2 - s.size(), '0') + s;
  }
  std::string upper = s;
  std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
  for (const auto& [abbr, code] : kStates) {
    if (upper == abbr) return code;
  }
  throw std::invalid_argument("unknown state '" + std::string(state) + "'");
}

std::string state_abbreviation(std::string_view fips) {
  for (const auto& [abbr, code] : kStates) {
    if (fips == code) return abbr;
  }
  return std::string(fips);
}

}  // namespace gnar
