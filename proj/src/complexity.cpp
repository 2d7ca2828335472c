#include "relgrowth/complexity.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

#include "relgrowth/errors.hpp"

namespace relgrowth::complexity {

namespace {

double log2_or_zero(std::uint64_t n) {
  return n == 0 ? 0.0 : std::log2(static_cast<double>(n));
}

}  // namespace

void HalsteadCounts::validate() const {
  if (eta1 == 0 || eta2 == 0 || n1 == 0 || n2 == 0) {
    throw ValidationError("all Halstead counts must be positive");
  }
  if (n1 < eta1) {
    throw ValidationError("operator uses n1 cannot be below distinct eta1");
  }
  if (n2 < eta2) {
    throw ValidationError("operand uses n2 cannot be below distinct eta2");
  }
}

HalsteadReport halstead_report(const HalsteadCounts& c,
                               const HalsteadOptions& options) {
  c.validate();
  if (!(options.defect_volume_divisor > 0.0)) {
    throw ValidationError("defect_volume_divisor must be positive");
  }
  const double eta1 = static_cast<double>(c.eta1);
  const double eta2 = static_cast<double>(c.eta2);
  const double log2_eta = std::log2(eta1 + eta2);

  HalsteadReport r;
  r.vocabulary = c.eta1 + c.eta2;
  r.length = c.n1 + c.n2;
  const double n = static_cast<double>(r.length);
  r.theoretical_length =
      eta1 * log2_or_zero(c.eta1) + eta2 * log2_or_zero(c.eta2);
  r.volume = n * log2_eta;
  r.level = 2.0 * eta2 / (eta1 * static_cast<double>(c.n2));
  r.effort =
      eta1 * static_cast<double>(c.n2) * n * log2_eta / (2.0 * eta2);
  r.predicted_defects = r.volume / options.defect_volume_divisor;
  return r;
}

void TrwFactors::validate() const {
  for (double v : as_array()) {
    if (!std::isfinite(v)) throw ValidationError("TRW factors must be finite");
  }
}

double trw_complexity(const TrwFactors& f) {
  f.validate();
  double c = 0.0;
  const auto values = f.as_array();
  for (std::size_t j = 0; j < values.size(); ++j) {
    c += kTrwWeights[j] * values[j];
  }
  return c;
}

TrwModel trw_fit(const std::vector<TrwSample>& samples) {
  if (samples.size() < 5) {
    throw InsufficientData("TRW fit needs at least 5 samples, got " +
                           std::to_string(samples.size()));
  }
  const auto rows = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(rows, 5);
  Eigen::VectorXd observed(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    samples[static_cast<std::size_t>(i)].factors.validate();
    const auto values =
        samples[static_cast<std::size_t>(i)].factors.as_array();
    for (Eigen::Index j = 0; j < 5; ++j) {
      design(i, j) =
          kTrwWeights[static_cast<std::size_t>(j)] *
          values[static_cast<std::size_t>(j)];
    }
    observed(i) = samples[static_cast<std::size_t>(i)].observed_errors;
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 5) {
    // The permutation sorts reliable pivots first; the tail columns are the
    // ones expressible through the others.
    std::string names;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index j = qr.rank(); j < 5; ++j) {
      if (!names.empty()) names += ", ";
      names += kTrwFactorNames[static_cast<std::size_t>(perm(j))];
    }
    throw RankDeficient("collinear factor columns: " + names);
  }

  const Eigen::VectorXd kappa = qr.solve(observed);
  TrwModel model;
  for (Eigen::Index j = 0; j < 5; ++j) {
    model.kappas[static_cast<std::size_t>(j)] = kappa(j);
  }
  model.residual_sse = (observed - design * kappa).squaredNorm();
  return model;
}

double trw_predict(const TrwModel& m, const TrwFactors& f) {
  f.validate();
  for (double k : m.kappas) {
    if (!std::isfinite(k)) throw ValidationError("TRW model must be finite");
  }
  double prediction = 0.0;
  const auto values = f.as_array();
  for (std::size_t j = 0; j < values.size(); ++j) {
    prediction += kTrwWeights[j] * values[j] * m.kappas[j];
  }
  return prediction;
}

std::vector<TrwSample> read_trw_samples(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty input");
  // Tolerate surrounding whitespace in the header only.
  std::string header = line;
  header.erase(0, header.find_first_not_of(" \t\r\n"));
  header.erase(header.find_last_not_of(" \t\r\n") + 1);
  if (header != "l_tot,c_inf,c_c,c_io,u_read,errors") {
    throw ParseError(
        "TRW sample CSV must start with 'l_tot,c_inf,c_c,c_io,u_read,errors'");
  }
  std::vector<TrwSample> samples;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string field;
    std::array<double, 6> values{};
    for (std::size_t j = 0; j < 6; ++j) {
      if (!std::getline(fields, field, ',')) {
        throw ParseError("row " + std::to_string(row) + ": expected 6 fields");
      }
      try {
        values[j] = std::stod(field);
      } catch (const std::exception&) {
        throw ParseError("row " + std::to_string(row) + ", field " +
                         std::to_string(j + 1) + ": not a number: '" + field +
                         "'");
      }
    }
    if (std::getline(fields, field, ',')) {
      throw ParseError("row " + std::to_string(row) + ": expected 6 fields");
    }
    TrwSample s;
    s.factors = {values[0], values[1], values[2], values[3], values[4]};
    s.observed_errors = values[5];
    samples.push_back(s);
  }
  return samples;
}

std::vector<TrwSample> load_trw_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_trw_samples(in);
}

}  // namespace relgrowth::complexity
