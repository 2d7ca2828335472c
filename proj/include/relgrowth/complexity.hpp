#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace relgrowth::complexity {

/// Pre-counted Halstead primitives: distinct operators/operands (eta1, eta2)
/// and their total uses (n1, n2). Counting tokens from source text is out of
/// scope; callers bring their own counts.
struct HalsteadCounts {
  std::uint64_t eta1 = 0;
  std::uint64_t eta2 = 0;
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;

  void validate() const;
};

struct HalsteadOptions {
  /// Empirical divisor in the defect prediction D0 = V / divisor.
  double defect_volume_divisor = 3000.0;
};

struct HalsteadReport {
  std::uint64_t vocabulary = 0;  // eta = eta1 + eta2
  std::uint64_t length = 0;      // N = n1 + n2
  double theoretical_length = 0.0;
  double volume = 0.0;  // bits
  double level = 0.0;
  double effort = 0.0;
  double predicted_defects = 0.0;
};

/// Halstead complexity report:
///   theoretical length  = eta1*log2(eta1) + eta2*log2(eta2)
///   volume              = N*log2(eta)
///   level               = 2*eta2 / (eta1*n2)
///   effort              = eta1*n2*N*log2(eta) / (2*eta2)
///   predicted defects   = volume / divisor
HalsteadReport halstead_report(const HalsteadCounts& c,
                               const HalsteadOptions& options = {});

/// TRW complexity factors of one code unit.
struct TrwFactors {
  double logical = 0.0;      // L_tot
  double interlink = 0.0;    // C_inf
  double calc = 0.0;         // C_c
  double io = 0.0;           // C_io
  double readability = 0.0;  // U_read

  void validate() const;
  std::array<double, 5> as_array() const {
    return {logical, interlink, calc, io, readability};
  }
};

/// Fixed factor weights of the TRW linear model, in TrwFactors field order.
inline constexpr std::array<double, 5> kTrwWeights{1.0, 0.1, 0.2, 0.4, -0.1};

inline constexpr std::array<const char*, 5> kTrwFactorNames{
    "l_tot", "c_inf", "c_c", "c_io", "u_read"};

/// Weighted-sum complexity C of a code unit (unit correlation indices).
double trw_complexity(const TrwFactors& f);

struct TrwSample {
  TrwFactors factors;
  double observed_errors = 0.0;
};

struct TrwModel {
  std::array<double, 5> kappas{};  // correlation indices, factor order
  double residual_sse = 0.0;
};

/// Least-squares fit of the five correlation indices on pre-weighted factor
/// columns, solved by column-pivoted QR (the normal equations are never
/// formed). Needs at least 5 samples and a full-rank design; RankDeficient
/// names the dependent columns.
TrwModel trw_fit(const std::vector<TrwSample>& samples);

/// Predicted error count under a fitted TRW model.
double trw_predict(const TrwModel& m, const TrwFactors& f);

/// CSV with header `l_tot,c_inf,c_c,c_io,u_read,errors`.
std::vector<TrwSample> read_trw_samples(std::istream& in);
std::vector<TrwSample> load_trw_samples(const std::string& path);

}  // namespace relgrowth::complexity
