#include "relgrowth/datasets.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "relgrowth/errors.hpp"

namespace relgrowth {

namespace {

std::string row_label(std::size_t row) {
  return "row " + std::to_string(row);
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, std::size_t row,
                    const std::string& field) {
  const std::string t = trimmed(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ParseError(row_label(row) + ", field '" + field +
                     "': not a number: '" + text + "'");
  }
  if (used != t.size()) {
    throw ParseError(row_label(row) + ", field '" + field +
                     "': trailing characters in '" + text + "'");
  }
  return value;
}

std::uint64_t parse_count(const std::string& text, std::size_t row,
                          const std::string& field) {
  const std::string t = trimmed(text);
  if (!t.empty() && t[0] == '-') {
    throw ValidationError(row_label(row) + ", field '" + field +
                          "': must be a nonnegative integer, got '" + text +
                          "'");
  }
  try {
    std::size_t used = 0;
    const std::uint64_t value = std::stoull(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return value;
  } catch (const std::exception&) {
    throw ParseError(row_label(row) + ", field '" + field +
                     "': not an integer: '" + text + "'");
  }
}

void require_fields(const std::vector<std::string>& fields, std::size_t n,
                    std::size_t row) {
  if (fields.size() != n) {
    throw ParseError(row_label(row) + ": expected " + std::to_string(n) +
                     " fields, got " + std::to_string(fields.size()));
  }
}

FailureLog read_failure_log_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty input");
  const std::string header = trimmed(line);

  if (header == "interval") {
    std::vector<double> intervals;
    std::optional<double> total_time;
    std::size_t row = 1;
    while (std::getline(in, line)) {
      ++row;
      const std::string t = trimmed(line);
      if (t.empty()) continue;
      if (t.rfind("#total_time", 0) == 0) {
        const auto fields = split_csv_row(t);
        require_fields(fields, 2, row);
        total_time = parse_double(fields[1], row, "total_time");
        continue;
      }
      const double v = parse_double(t, row, "interval");
      if (!(v > 0.0)) {
        throw ValidationError(row_label(row) +
                              ", field 'interval': must be positive, got " +
                              t);
      }
      intervals.push_back(v);
    }
    return FailureLog::event_times(std::move(intervals), total_time);
  }

  if (header == "duration,count") {
    std::vector<Bin> bins;
    std::size_t row = 1;
    while (std::getline(in, line)) {
      ++row;
      const std::string t = trimmed(line);
      if (t.empty()) continue;
      const auto fields = split_csv_row(t);
      require_fields(fields, 2, row);
      Bin bin;
      bin.duration = parse_double(fields[0], row, "duration");
      bin.count = parse_count(fields[1], row, "count");
      if (!(bin.duration > 0.0)) {
        throw ValidationError(row_label(row) +
                              ", field 'duration': must be positive");
      }
      bins.push_back(bin);
    }
    return FailureLog::grouped_counts(std::move(bins));
  }

  throw ParseError("unrecognized CSV header '" + header +
                   "' (expected 'interval' or 'duration,count')");
}

FailureLog read_failure_log_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind")) {
    throw ParseError("JSON failure log must be an object with a 'kind' field");
  }
  const std::string kind = doc["kind"].get<std::string>();
  std::optional<double> total_time;
  if (doc.contains("total_time")) total_time = doc["total_time"].get<double>();

  if (kind == "event_times") {
    if (!doc.contains("intervals") || !doc["intervals"].is_array()) {
      throw ParseError("event_times log requires an 'intervals' array");
    }
    std::vector<double> intervals;
    std::size_t row = 0;
    for (const auto& item : doc["intervals"]) {
      ++row;
      if (!item.is_number()) {
        throw ParseError("intervals[" + std::to_string(row - 1) +
                         "]: not a number");
      }
      intervals.push_back(item.get<double>());
    }
    return FailureLog::event_times(std::move(intervals), total_time);
  }
  if (kind == "grouped") {
    if (!doc.contains("bins") || !doc["bins"].is_array()) {
      throw ParseError("grouped log requires a 'bins' array");
    }
    std::vector<Bin> bins;
    std::size_t row = 0;
    for (const auto& item : doc["bins"]) {
      ++row;
      if (!item.is_array() || item.size() != 2) {
        throw ParseError("bins[" + std::to_string(row - 1) +
                         "]: expected [duration, count]");
      }
      Bin bin;
      bin.duration = item[0].get<double>();
      if (!item[1].is_number_integer() || item[1].get<double>() < 0) {
        throw ValidationError("bins[" + std::to_string(row - 1) +
                              "], field 'count': must be a nonnegative integer");
      }
      bin.count = item[1].get<std::uint64_t>();
      bins.push_back(bin);
    }
    return FailureLog::grouped_counts(std::move(bins));
  }
  throw ParseError("unknown log kind '" + kind + "'");
}

}  // namespace

FailureLog FailureLog::event_times(std::vector<double> intervals,
                                   std::optional<double> total_time) {
  double sum = 0.0;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const double v = intervals[i];
    if (!std::isfinite(v) || v <= 0.0) {
      throw ValidationError("interval " + std::to_string(i + 1) +
                            " must be strictly positive, got " +
                            std::to_string(v));
    }
    sum += v;
  }
  FailureLog log;
  log.kind_ = LogKind::EventTimes;
  log.total_time_ = total_time.value_or(sum);
  if (!std::isfinite(log.total_time_) || log.total_time_ < 0.0) {
    throw ValidationError("total_time must be a nonnegative real");
  }
  // Tolerate rounding from text round-trips when T was written as sum(t_i).
  if (log.total_time_ < sum * (1.0 - 1e-12)) {
    throw ValidationError("total_time " + std::to_string(log.total_time_) +
                          " is smaller than the sum of intervals " +
                          std::to_string(sum));
  }
  log.total_time_ = std::max(log.total_time_, sum);
  log.intervals_ = std::move(intervals);
  return log;
}

FailureLog FailureLog::grouped_counts(std::vector<Bin> bins) {
  double sum = 0.0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (!std::isfinite(bins[i].duration) || bins[i].duration <= 0.0) {
      throw ValidationError("bin " + std::to_string(i + 1) +
                            ": duration must be strictly positive");
    }
    sum += bins[i].duration;
  }
  FailureLog log;
  log.kind_ = LogKind::GroupedCounts;
  log.bins_ = std::move(bins);
  log.total_time_ = sum;
  return log;
}

const std::vector<double>& FailureLog::intervals() const {
  if (kind_ != LogKind::EventTimes) {
    throw ValidationError("intervals() requires an event-times log");
  }
  return intervals_;
}

const std::vector<Bin>& FailureLog::bins() const {
  if (kind_ != LogKind::GroupedCounts) {
    throw ValidationError("bins() requires a grouped-counts log");
  }
  return bins_;
}

std::uint64_t FailureLog::error_count() const noexcept {
  if (kind_ == LogKind::EventTimes) return intervals_.size();
  std::uint64_t total = 0;
  for (const Bin& b : bins_) total += b.count;
  return total;
}

std::vector<double> FailureLog::cumulative_times() const {
  const auto& ts = intervals();
  std::vector<double> cum(ts.size());
  double running = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    running += ts[i];
    cum[i] = running;
  }
  return cum;
}

std::vector<double> FailureLog::bin_edges() const {
  const auto& bs = bins();
  std::vector<double> edges(bs.size() + 1, 0.0);
  for (std::size_t i = 0; i < bs.size(); ++i) {
    edges[i + 1] = edges[i] + bs[i].duration;
  }
  return edges;
}

FailureLog FailureLog::prefix(std::size_t n) const {
  if (kind_ == LogKind::EventTimes) {
    if (n > intervals_.size()) {
      throw ValidationError("prefix length exceeds the log");
    }
    std::vector<double> head(intervals_.begin(),
                             intervals_.begin() + static_cast<long>(n));
    return event_times(std::move(head));
  }
  if (n > bins_.size()) throw ValidationError("prefix length exceeds the log");
  std::vector<Bin> head(bins_.begin(), bins_.begin() + static_cast<long>(n));
  return grouped_counts(std::move(head));
}

FailureLog read_failure_log(std::istream& in, LogFormat format) {
  return format == LogFormat::Csv ? read_failure_log_csv(in)
                                  : read_failure_log_json(in);
}

FailureLog load_failure_log(const std::string& path, LogFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_failure_log(in, format);
}

void write_failure_log(const FailureLog& log, std::ostream& out,
                       LogFormat format) {
  if (format == LogFormat::Csv) {
    out << std::setprecision(17);
    if (log.kind() == LogKind::EventTimes) {
      out << "interval\n";
      for (double t : log.intervals()) out << t << "\n";
      out << "#total_time," << log.total_time() << "\n";
    } else {
      out << "duration,count\n";
      for (const Bin& b : log.bins()) out << b.duration << "," << b.count << "\n";
    }
    return;
  }
  nlohmann::ordered_json doc;
  if (log.kind() == LogKind::EventTimes) {
    doc["kind"] = "event_times";
    doc["intervals"] = log.intervals();
  } else {
    doc["kind"] = "grouped";
    auto bins = nlohmann::ordered_json::array();
    for (const Bin& b : log.bins()) {
      bins.push_back({b.duration, b.count});
    }
    doc["bins"] = std::move(bins);
  }
  doc["total_time"] = log.total_time();
  out << doc.dump(2) << "\n";
}

void save_failure_log(const FailureLog& log, const std::string& path,
                      LogFormat format) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  write_failure_log(log, out, format);
}

void SeedingTally::validate() const {
  if (seeded_found > seeded) {
    throw ValidationError("seeded_found (" + std::to_string(seeded_found) +
                          ") exceeds seeded (" + std::to_string(seeded) + ")");
  }
  if (total_fo.has_value() != sampled_fo.has_value() ||
      total_fo.has_value() != control_pct.has_value()) {
    throw ValidationError(
        "functional-object fields must be given together "
        "(total_fo, sampled_fo, control_pct)");
  }
  if (total_fo) {
    if (*total_fo == 0) throw ValidationError("total_fo must be positive");
    if (*sampled_fo == 0) throw ValidationError("sampled_fo must be positive");
    if (*sampled_fo > *total_fo) {
      throw ValidationError("sampled_fo exceeds total_fo");
    }
    if (!(*control_pct > 0.0) || *control_pct > 100.0) {
      throw ValidationError("control_pct must lie in (0, 100]");
    }
  }
}

void GroupTally::validate() const {
  if (common_found > std::min(group1_found, group2_found)) {
    throw ValidationError(
        "common_found exceeds the smaller group's find count");
  }
}

void PartitionTrace::validate() const {
  for (std::size_t i = 0; i < found_in_part2.size(); ++i) {
    if (found_in_part2[i] != 0 && found_in_part2[i] != 1) {
      throw ValidationError("trace entry " + std::to_string(i + 1) +
                            " must be 0 or 1");
    }
  }
}

std::uint64_t PartitionTrace::part1_count() const {
  std::uint64_t n = 0;
  for (int x : found_in_part2) n += (x == 0);
  return n;
}

std::uint64_t PartitionTrace::part2_count() const {
  std::uint64_t n = 0;
  for (int x : found_in_part2) n += (x == 1);
  return n;
}

RunProfile RunProfile::create(std::vector<DomainTally> domains,
                              std::vector<std::vector<double>> per_run) {
  if (domains.empty()) throw ValidationError("profile needs at least one domain");
  double prob_sum = 0.0;
  for (std::size_t i = 0; i < domains.size(); ++i) {
    const DomainTally& d = domains[i];
    if (d.prob < 0.0 || d.prob > 1.0) {
      throw ValidationError("domain " + std::to_string(i + 1) +
                            ": prob must lie in [0, 1]");
    }
    if (d.runs == 0) {
      throw ValidationError("domain " + std::to_string(i + 1) +
                            ": runs must be positive");
    }
    if (d.failures > d.runs) {
      throw ValidationError("domain " + std::to_string(i + 1) +
                            ": failures exceed runs");
    }
    prob_sum += d.prob;
  }
  if (std::fabs(prob_sum - 1.0) > 1e-9) {
    throw ValidationError("domain probabilities must sum to 1 (got " +
                          std::to_string(prob_sum) + ")");
  }
  for (std::size_t j = 0; j < per_run.size(); ++j) {
    if (per_run[j].size() != domains.size()) {
      throw ValidationError("per-run row " + std::to_string(j + 1) +
                            " length does not match the domain count");
    }
    double row_sum = 0.0;
    for (double p : per_run[j]) {
      if (p < 0.0 || p > 1.0) {
        throw ValidationError("per-run row " + std::to_string(j + 1) +
                              ": probabilities must lie in [0, 1]");
      }
      row_sum += p;
    }
    if (std::fabs(row_sum - 1.0) > 1e-9) {
      throw ValidationError("per-run row " + std::to_string(j + 1) +
                            " must sum to 1 (got " + std::to_string(row_sum) +
                            ")");
    }
  }
  RunProfile profile;
  profile.domains_ = std::move(domains);
  profile.per_run_ = std::move(per_run);
  return profile;
}

RunProfile read_run_profile(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trimmed(line) != "prob,runs,failures") {
    throw ParseError("run profile CSV must start with 'prob,runs,failures'");
  }
  std::vector<DomainTally> domains;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const std::string t = trimmed(line);
    if (t.empty()) continue;
    const auto fields = split_csv_row(t);
    require_fields(fields, 3, row);
    DomainTally d;
    d.prob = parse_double(fields[0], row, "prob");
    d.runs = parse_count(fields[1], row, "runs");
    d.failures = parse_count(fields[2], row, "failures");
    domains.push_back(d);
  }
  return RunProfile::create(std::move(domains));
}

RunProfile load_run_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_run_profile(in);
}

void UpgradeHistory::validate() const {
  for (std::size_t j = 0; j < stages.size(); ++j) {
    const UpgradeStage& s = stages[j];
    if (s.k1 < 0.0 || s.k2 < 0.0) {
      throw ValidationError("stage " + std::to_string(j + 1) +
                            ": metrics must be nonnegative");
    }
    if (s.runs == 0) {
      throw ValidationError("stage " + std::to_string(j + 1) +
                            ": runs must be positive");
    }
    if (s.successes > s.runs) {
      throw ValidationError("stage " + std::to_string(j + 1) +
                            ": successes exceed runs");
    }
  }
}

UpgradeHistory read_upgrade_history(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trimmed(line) != "k1,k2,runs,successes") {
    throw ParseError("upgrade history CSV must start with 'k1,k2,runs,successes'");
  }
  UpgradeHistory history;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const std::string t = trimmed(line);
    if (t.empty()) continue;
    const auto fields = split_csv_row(t);
    require_fields(fields, 4, row);
    UpgradeStage s;
    s.k1 = parse_double(fields[0], row, "k1");
    s.k2 = parse_double(fields[1], row, "k2");
    s.runs = parse_count(fields[2], row, "runs");
    s.successes = parse_count(fields[3], row, "successes");
    history.stages.push_back(s);
  }
  history.validate();
  return history;
}

UpgradeHistory load_upgrade_history(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_upgrade_history(in);
}

}  // namespace relgrowth
