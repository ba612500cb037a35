#include "tailmax/data_pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace tailmax {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

std::string format_g12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

const std::vector<double>& AlignedPanel::column(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return columns[i];
  }
  throw DataError("column '" + std::string(name) + "' not in panel");
}

Day parse_date(std::string_view text) {
  const auto s = trim(text);
  int y = 0;
  unsigned m = 0, d = 0;
  const bool shape = s.size() == 10 && s[4] == '-' && s[7] == '-';
  if (!shape || !parse_int(s.substr(0, 4), y) || !parse_int(s.substr(5, 2), m) || !parse_int(s.substr(8, 2), d)) {
    throw DataError("malformed date '" + std::string(text) + "' (expected YYYY-MM-DD)");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) throw DataError("malformed date '" + std::string(text) + "' (no such calendar day)");
  return Day{ymd};
}

std::string format_date(Day day) {
  const std::chrono::year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, field_started = false;
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !trim(field).empty()) throw DataError("CSV: stray quote inside unquoted field");
        field.clear();
        quoted = true;
        field_started = true;
        break;
      case ',': end_field(); break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n': end_record(); break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) throw DataError("CSV: unterminated quoted field");
  if (field_started || !record.empty()) end_record();
  return records;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<RawSeries> load_csv(const std::filesystem::path& path, const std::vector<std::string>& columns,
                                const std::vector<std::string>& missing_tokens) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto records = parse_csv(buffer.str());
  if (records.empty()) throw DataError("'" + path.string() + "' is empty");

  const auto& header = records.front();
  std::size_t date_col = header.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name(trim(header[c]));
    if (name == "date") {
      date_col = c;
    } else if (!index.emplace(name, c).second) {
      throw DataError("duplicate column '" + name + "' in header");
    }
  }
  if (date_col == header.size()) throw DataError("'" + path.string() + "' has no 'date' column");

  std::vector<std::string> wanted = columns;
  if (wanted.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c != date_col) wanted.emplace_back(trim(header[c]));
    }
  }
  if (wanted.empty()) throw DataError("'" + path.string() + "' has no value columns");
  std::vector<std::size_t> cols;
  for (const auto& w : wanted) {
    const auto it = index.find(w);
    if (it == index.end()) throw DataError("column '" + w + "' not found in '" + path.string() + "'");
    cols.push_back(it->second);
  }

  std::vector<RawSeries> out(wanted.size());
  for (std::size_t k = 0; k < wanted.size(); ++k) out[k].name = wanted[k];
  std::set<Day> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::size_t line = r + 1;
    if (rec.size() != header.size()) {
      throw DataError("row " + std::to_string(line) + ": expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(rec.size()));
    }
    Day day;
    try {
      day = parse_date(rec[date_col]);
    } catch (const DataError& e) {
      throw DataError("row " + std::to_string(line) + ": " + e.what());
    }
    if (!seen.insert(day).second) throw DataError("duplicate date " + format_date(day));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto cell = trim(rec[cols[k]]);
      Observation obs{day, std::nullopt};
      const bool missing =
          std::find(missing_tokens.begin(), missing_tokens.end(), std::string(cell)) != missing_tokens.end();
      if (!missing) {
        double v = 0.0;
        if (!parse_double(cell, v)) {
          throw DataError("row " + std::to_string(line) + ", column '" + wanted[k] + "': non-numeric value '" +
                          std::string(cell) + "'");
        }
        obs.value = v;
      }
      out[k].observations.push_back(obs);
    }
  }
  for (auto& s : out) {
    std::sort(s.observations.begin(), s.observations.end(),
              [](const Observation& a, const Observation& b) { return a.date < b.date; });
  }
  return out;
}

AlignedPanel align_and_log_diff(const std::vector<RawSeries>& series) {
  if (series.empty()) throw DataError("align_and_log_diff needs at least one series");
  std::map<Day, std::vector<double>> rows;  // complete rows only
  std::map<Day, std::size_t> present;
  for (const auto& s : series) {
    for (const auto& o : s.observations) {
      if (o.value) ++present[o.date];
    }
  }
  for (const auto& [day, count] : present) {
    if (count == series.size()) rows.emplace(day, std::vector<double>{});
  }
  for (const auto& s : series) {
    for (const auto& o : s.observations) {
      const auto it = rows.find(o.date);
      if (it == rows.end()) continue;
      if (!(*o.value > 0.0)) {
        throw DataError("series '" + s.name + "' has nonpositive value " + format_g12(*o.value) + " on " +
                        format_date(o.date));
      }
      it->second.push_back(*o.value);
    }
  }
  if (rows.size() < 2) {
    throw DataError("only " + std::to_string(rows.size()) + " complete aligned date(s); need at least 2");
  }

  AlignedPanel panel;
  for (const auto& s : series) panel.names.push_back(s.name);
  panel.columns.assign(series.size(), {});
  auto prev = rows.begin();
  for (auto it = std::next(rows.begin()); it != rows.end(); prev = it, ++it) {
    panel.dates.push_back(it->first);
    for (std::size_t k = 0; k < series.size(); ++k) {
      panel.columns[k].push_back(std::log(it->second[k]) - std::log(prev->second[k]));
    }
  }
  return panel;
}

void write_panel_csv(const AlignedPanel& panel, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << "date";
  for (const auto& n : panel.names) out << ',' << csv_field(n);
  out << "\r\n";
  for (std::size_t i = 0; i < panel.size(); ++i) {
    out << format_date(panel.dates[i]);
    for (const auto& col : panel.columns) out << ',' << format_g12(col[i]);
    out << "\r\n";
  }
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace tailmax
