#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace relgrowth {

enum class LogKind { EventTimes, GroupedCounts };

/// One observation interval of a grouped failure record.
struct Bin {
  double duration = 0.0;
  std::uint64_t count = 0;
};

/// Immutable failure record shared by every model module: either the ordered
/// inter-failure intervals t_i (EventTimes) or per-interval counts
/// (GroupedCounts), plus the observation horizon T. Instances never change
/// after construction and are safe to read from any number of threads.
class FailureLog {
 public:
  /// Build an event-times log. `total_time` defaults to the sum of the
  /// intervals; if given it must be at least that sum.
  static FailureLog event_times(std::vector<double> intervals,
                                std::optional<double> total_time = {});

  /// Build a grouped-counts log; the horizon is the sum of bin durations.
  static FailureLog grouped_counts(std::vector<Bin> bins);

  LogKind kind() const noexcept { return kind_; }
  const std::vector<double>& intervals() const;
  const std::vector<Bin>& bins() const;
  double total_time() const noexcept { return total_time_; }

  /// Number of recorded errors (events, or the sum of bin counts).
  std::uint64_t error_count() const noexcept;

  /// Cumulative event times s_i = t_1 + ... + t_i (EventTimes only).
  std::vector<double> cumulative_times() const;

  /// Bin boundaries 0 = b_0 < b_1 < ... < b_m = T (GroupedCounts only).
  std::vector<double> bin_edges() const;

  /// First `n` events (or bins) with the horizon trimmed accordingly.
  FailureLog prefix(std::size_t n) const;

 private:
  FailureLog() = default;

  LogKind kind_ = LogKind::EventTimes;
  std::vector<double> intervals_;
  std::vector<Bin> bins_;
  double total_time_ = 0.0;
};

enum class LogFormat { Csv, Json };

/// Parse a failure log.
///
/// CSV event times: header `interval`, one positive decimal per row, and an
/// optional trailing `#total_time,<T>` row. CSV grouped: header
/// `duration,count`. JSON: `{"kind": "event_times"|"grouped",
/// "intervals": [...], "bins": [[d,c],...], "total_time": T}`.
FailureLog read_failure_log(std::istream& in, LogFormat format);
FailureLog load_failure_log(const std::string& path, LogFormat format);

void write_failure_log(const FailureLog& log, std::ostream& out,
                       LogFormat format);
void save_failure_log(const FailureLog& log, const std::string& path,
                      LogFormat format);

/// Counts from an error-seeding experiment: S errors introduced, v of them
/// identified, n own errors identified. The run-time functional-object
/// variant additionally records the object totals and the controlled share.
struct SeedingTally {
  std::uint64_t seeded = 0;        // S
  std::uint64_t seeded_found = 0;  // v
  std::uint64_t own_found = 0;     // n

  std::optional<std::uint64_t> total_fo;    // M_fo
  std::optional<std::uint64_t> sampled_fo;  // m_fo
  std::optional<double> control_pct;        // p, in (0, 100]

  void validate() const;
};

/// Error counts from two independent testing groups.
struct GroupTally {
  std::uint64_t group1_found = 0;  // N_1
  std::uint64_t group2_found = 0;  // N_2
  std::uint64_t common_found = 0;  // N_12

  void validate() const;
};

/// Detection-order trace for the two-part partition model: one entry per
/// detected error, 0 if it was found in Part 1, 1 if in Part 2.
struct PartitionTrace {
  std::vector<int> found_in_part2;

  void validate() const;
  std::uint64_t part1_count() const;
  std::uint64_t part2_count() const;
};

/// Per-domain run tally for the Nelson model.
struct DomainTally {
  double prob = 0.0;            // p_i, occurrence probability
  std::uint64_t runs = 0;       // N_i
  std::uint64_t failures = 0;   // n_i
};

/// Input-domain partition with run outcomes; optionally a per-run occurrence
/// matrix p_ji (row j = run, column i = domain, rows sum to 1).
class RunProfile {
 public:
  static RunProfile create(std::vector<DomainTally> domains,
                           std::vector<std::vector<double>> per_run = {});

  const std::vector<DomainTally>& domains() const noexcept { return domains_; }
  const std::vector<std::vector<double>>& per_run_occurrence() const noexcept {
    return per_run_;
  }

 private:
  RunProfile() = default;

  std::vector<DomainTally> domains_;
  std::vector<std::vector<double>> per_run_;
};

/// CSV with header `prob,runs,failures`.
RunProfile read_run_profile(std::istream& in);
RunProfile load_run_profile(const std::string& path);

/// One upgrade (or debugging) stage: modification metrics and run outcomes.
struct UpgradeStage {
  double k1 = 0.0;  // debug-modification metric k_1j
  double k2 = 0.0;  // upgrade-modification metric k_2j
  std::uint64_t runs = 0;
  std::uint64_t successes = 0;
};

struct UpgradeHistory {
  std::vector<UpgradeStage> stages;

  void validate() const;
};

/// CSV with header `k1,k2,runs,successes`.
UpgradeHistory read_upgrade_history(std::istream& in);
UpgradeHistory load_upgrade_history(const std::string& path);

}  // namespace relgrowth
