#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "stratah/errors.hpp"
#include "stratah/kaplan_meier.hpp"

namespace stratah {

enum class Arm : int { control = 0, treatment = 1 };

// One subject's observed follow-up.  `stratum` indexes Dataset::stratum_labels.
struct SubjectRecord {
  double time = 0.0;
  bool event = false;
  Arm arm = Arm::control;
  int stratum = 0;
};

struct Dataset {
  std::vector<SubjectRecord> records;
  std::vector<std::string> stratum_labels;
  std::array<std::string, 2> arm_labels{"0", "1"};  // [control, treatment]

  int n_strata() const { return int(stratum_labels.size()); }

  // Observations grouped as [arm][stratum].
  std::array<std::vector<std::vector<Observation>>, 2> cells() const {
    std::array<std::vector<std::vector<Observation>>, 2> out;
    for (auto& arm_cells : out) arm_cells.resize(stratum_labels.size());
    for (const auto& r : records)
      out[size_t(r.arm)][size_t(r.stratum)].push_back({r.time, r.event});
    return out;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return char(std::tolower(c));
  });
  return s;
}

inline std::vector<std::string> split(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

inline double parse_time(const std::string& field, long line_no) {
  if (field.empty()) throw ParseError("empty time value", line_no);
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size())
    throw ParseError("cannot parse time '" + field + "'", line_no);
  if (!std::isfinite(v)) throw ParseError("time must be finite", line_no);
  if (v < 0.0) throw ParseError("time must be non-negative", line_no);
  return v;
}

}  // namespace detail

// Parse a delimited table with columns time/status/arm/stratum (any order,
// case-insensitive header, comma or tab auto-detected).  `control_label`
// names the arm mapped to group 0; status is 1 for an event, 0 censored.
inline Dataset parse_dataset(std::string_view text, std::string_view control_label) {
  // split into lines, tolerating trailing \r
  std::vector<std::pair<long, std::string>> lines;
  long no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find('\n', start);
    if (pos == std::string_view::npos) pos = text.size();
    std::string line(text.substr(start, pos - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++no;
    lines.emplace_back(no, std::move(line));
    if (pos == text.size()) break;
    start = pos + 1;
  }
  // drop blank lines but keep original numbering
  std::erase_if(lines, [](const auto& l) { return detail::trim(l.second).empty(); });
  if (lines.empty()) throw ParseError("empty input", 1);

  const auto& [header_no, header] = lines.front();
  const char delim = header.find('\t') != std::string::npos ? '\t' : ',';
  const auto columns = detail::split(header, delim);
  int idx_time = -1, idx_status = -1, idx_arm = -1, idx_stratum = -1;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const std::string c = detail::lower(columns[i]);
    if (c == "time") idx_time = int(i);
    else if (c == "status") idx_status = int(i);
    else if (c == "arm") idx_arm = int(i);
    else if (c == "stratum") idx_stratum = int(i);
  }
  for (auto [idx, name] : {std::pair{idx_time, "time"}, {idx_status, "status"},
                           {idx_arm, "arm"}, {idx_stratum, "stratum"}}) {
    if (idx < 0)
      throw ParseError(std::string("missing required column '") + name + "'",
                       header_no);
  }

  struct Row {
    double time;
    bool event;
    std::string arm, stratum;
  };
  std::vector<Row> rows;
  std::set<std::string> arm_set;
  std::set<std::string> stratum_set;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& [line_no, line] = lines[li];
    const auto fields = detail::split(line, delim);
    if (fields.size() != columns.size())
      throw ParseError("expected " + std::to_string(columns.size()) +
                           " fields, found " + std::to_string(fields.size()),
                       line_no);
    Row row;
    row.time = detail::parse_time(fields[std::size_t(idx_time)], line_no);
    const std::string& status = fields[std::size_t(idx_status)];
    if (status == "1") row.event = true;
    else if (status == "0") row.event = false;
    else throw ParseError("status must be 0 or 1, found '" + status + "'", line_no);
    row.arm = fields[std::size_t(idx_arm)];
    row.stratum = fields[std::size_t(idx_stratum)];
    if (row.arm.empty()) throw ParseError("empty arm label", line_no);
    if (row.stratum.empty()) throw ParseError("empty stratum label", line_no);
    arm_set.insert(row.arm);
    stratum_set.insert(row.stratum);
    rows.push_back(std::move(row));
  }

  if (arm_set.size() != 2)
    throw InvalidInput("dataset must contain exactly 2 arms, found " +
                       std::to_string(arm_set.size()));
  const std::string control(control_label);
  if (!arm_set.count(control))
    throw InvalidInput("control label '" + control + "' not present in data");

  Dataset ds;
  ds.arm_labels[0] = control;
  for (const auto& a : arm_set)
    if (a != control) ds.arm_labels[1] = a;
  ds.stratum_labels.assign(stratum_set.begin(), stratum_set.end());

  std::map<std::string, int> stratum_index;
  for (std::size_t i = 0; i < ds.stratum_labels.size(); ++i)
    stratum_index[ds.stratum_labels[i]] = int(i);

  ds.records.reserve(rows.size());
  for (const auto& r : rows) {
    SubjectRecord rec;
    rec.time = r.time;
    rec.event = r.event;
    rec.arm = r.arm == control ? Arm::control : Arm::treatment;
    rec.stratum = stratum_index.at(r.stratum);
    ds.records.push_back(rec);
  }

  // every (arm, stratum) cell must be populated
  std::vector<std::array<int, 2>> counts(ds.stratum_labels.size(), {0, 0});
  for (const auto& r : ds.records) ++counts[size_t(r.stratum)][size_t(r.arm)];
  for (std::size_t k = 0; k < counts.size(); ++k)
    for (int j = 0; j < 2; ++j)
      if (counts[k][size_t(j)] == 0)
        throw MissingStratumArm("stratum '" + ds.stratum_labels[k] +
                                "' has no records in arm '" +
                                ds.arm_labels[size_t(j)] + "'");
  return ds;
}

// Serialize back to the delimited format accepted by parse_dataset; times
// round-trip exactly.
inline std::string to_delimited(const Dataset& ds, char delim = ',') {
  std::string out = "time";
  out += delim;
  out += "status";
  out += delim;
  out += "arm";
  out += delim;
  out += "stratum\n";
  char buf[64];
  for (const auto& r : ds.records) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.time);
    out += buf;
    out += delim;
    out += r.event ? '1' : '0';
    out += delim;
    out += ds.arm_labels[size_t(r.arm)];
    out += delim;
    out += ds.stratum_labels[size_t(r.stratum)];
    out += '\n';
  }
  return out;
}

}  // namespace stratah
