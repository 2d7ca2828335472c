#include "relgrowth/nhpp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "relgrowth/errors.hpp"
#include "relgrowth/optimize.hpp"

namespace relgrowth::nhpp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double at(const NhppParams& p, const char* key) {
  const auto it = p.find(key);
  if (it == p.end()) {
    throw DomainError(std::string("missing parameter '") + key + "'");
  }
  return it->second;
}

double at_or(const NhppParams& p, const char* key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

void need_positive(const NhppParams& p, const char* key) {
  if (!(at(p, key) > 0.0) || !std::isfinite(at(p, key))) {
    throw DomainError(std::string("parameter '") + key +
                      "' must be positive and finite");
  }
}

bool gompertz_printed(const NhppParams& p) {
  return at_or(p, "printed_exponent", 0.0) != 0.0;
}

// --- mean value functions, one per catalog row ---

double mean_duane(const NhppParams& p, double t) {
  return at(p, "a") * std::pow(t, at(p, "g"));
}

double mean_gompertz(const NhppParams& p, double t) {
  const double a = at(p, "a");
  const double g = at(p, "g");
  const double c = at(p, "c");
  if (gompertz_printed(p)) return a * std::pow(g, c * t);
  return a * std::pow(g, std::pow(c, t));
}

double mean_go(const NhppParams& p, double t) {
  return at(p, "a") * -std::expm1(-at(p, "g") * t);
}

double mean_schneidewind(const NhppParams& p, double t) {
  const double g = at(p, "g");
  return at(p, "a") / g * -std::expm1(-g * t);
}

double mean_weibull(const NhppParams& p, double t) {
  return at(p, "a") * -std::expm1(-at(p, "g") * std::pow(t, at(p, "c")));
}

double mean_yamada(const NhppParams& p, double t) {
  const double inner = -std::expm1(-at(p, "g") * t);
  return at(p, "a") * -std::expm1(-at(p, "r") * at(p, "c") * inner);
}

double mean_rayleigh_s(const NhppParams& p, double t) {
  const double inner = -std::expm1(-at(p, "g") * t * t / 2.0);
  return at(p, "a") * -std::expm1(-at(p, "r") * at(p, "c") * inner);
}

double mean_delayed_s(const NhppParams& p, double t) {
  const double g = at(p, "g");
  return at(p, "a") * (1.0 - (1.0 + g * t) * std::exp(-g * t));
}

double mean_inflection_s(const NhppParams& p, double t) {
  const double u = std::exp(-at(p, "g") * t);
  return at(p, "a") * (1.0 - u) / (1.0 + at(p, "c") * u);
}

double mean_parametrized_s(const NhppParams& p, double t) {
  const double u = std::exp(-at(p, "g") * t);
  return at(p, "a") * (1.0 - u) / (1.0 + at(p, "psi") * u);
}

double mean_dahiya(const NhppParams& p, double t) {
  const double u = std::exp(-at(p, "g") * t);
  return at(p, "a") * (1.0 - u) / (1.0 + u);
}

double mean_pareto(const NhppParams& p, double t) {
  return at(p, "a") *
         (1.0 - std::pow(1.0 + t / at(p, "c"), 1.0 - at(p, "g")));
}

double mean_hyperexponential(const NhppParams& p, double t) {
  const double b1 = at(p, "b1");
  return at(p, "a") * (1.0 - b1 * std::exp(-at(p, "g1") * t) -
                       (1.0 - b1) * std::exp(-at(p, "g2") * t));
}

double mean_littlewood(const NhppParams& p, double t) {
  const double c = at(p, "c");
  return at(p, "a") * (1.0 - std::pow(c / (c + t), at(p, "g")));
}

double parabolic_poly(const NhppParams& p, double t) {
  return at(p, "l") / 3.0 * t * t * t + at(p, "m") / 2.0 * t * t +
         at(p, "n") * t;
}

double mean_parabolic(const NhppParams& p, double t) {
  return at(p, "a") * -std::expm1(-parabolic_poly(p, t));
}

double mean_logistic(const NhppParams& p, double t) {
  return at(p, "a") / (1.0 + at(p, "k") * std::exp(-at(p, "g") * t));
}

double mean_pham(const NhppParams& p, double t) {
  const double g = at(p, "g");
  const double d = at(p, "d");
  return at(p, "a") *
         (1.0 - std::exp(-g * t) * (1.0 + (g + d) * t + g * d * t * t));
}

double zhang_base(const NhppParams& p, double t) {
  const double alpha = at(p, "alpha");
  const double u = std::exp(-at(p, "g") * t);
  return 1.0 - (1.0 + alpha) * u / (1.0 + alpha * u);
}

double mean_zhang(const NhppParams& p, double t) {
  const double pb = at(p, "p") - at(p, "beta");
  const double exponent = at(p, "c") / at(p, "g") * pb;
  return at(p, "a") / pb * std::pow(zhang_base(p, t), exponent);
}

double mean_xie_log(const NhppParams& p, double t) {
  return at(p, "a") * std::pow(std::log1p(t), at(p, "g"));
}

double mean_musa_okumoto(const NhppParams& p, double t) {
  const double a = at(p, "a");
  return std::log1p(a * at(p, "g") * t) / a;
}

// --- analytic intensities ---

double lambda_duane(const NhppParams& p, double t) {
  const double g = at(p, "g");
  return at(p, "a") * g * std::pow(t, g - 1.0);
}

double lambda_gompertz(const NhppParams& p, double t) {
  const double g = at(p, "g");
  const double c = at(p, "c");
  if (gompertz_printed(p)) {
    // The printed variant decays; the derivative is negative by design.
    return mean_gompertz(p, t) * c * std::log(g);
  }
  return mean_gompertz(p, t) * std::log(g) * std::log(c) * std::pow(c, t);
}

double lambda_go(const NhppParams& p, double t) {
  const double g = at(p, "g");
  return at(p, "a") * g * std::exp(-g * t);
}

double lambda_schneidewind(const NhppParams& p, double t) {
  return at(p, "a") * std::exp(-at(p, "g") * t);
}

double lambda_weibull(const NhppParams& p, double t) {
  const double g = at(p, "g");
  const double c = at(p, "c");
  return at(p, "a") * g * c * std::pow(t, c - 1.0) *
         std::exp(-g * std::pow(t, c));
}

double lambda_yamada(const NhppParams& p, double t) {
  const double g = at(p, "g");
  const double rc = at(p, "r") * at(p, "c");
  const double inner = -std::expm1(-g * t);
  return at(p, "a") * rc * g * std::exp(-g * t) * std::exp(-rc * inner);
}

double lambda_rayleigh_s(const NhppParams& p, double t) {
  const double g = at(p, "g");
  const double rc = at(p, "r") * at(p, "c");
  const double inner = -std::expm1(-g * t * t / 2.0);
  return at(p, "a") * rc * g * t * std::exp(-g * t * t / 2.0) *
         std::exp(-rc * inner);
}

double lambda_delayed_s(const NhppParams& p, double t) {
  const double g = at(p, "g");
  return at(p, "a") * g * g * t * std::exp(-g * t);
}

double lambda_inflection_s(const NhppParams& p, double t) {
  const double g = at(p, "g");
  const double c = at(p, "c");
  const double u = std::exp(-g * t);
  const double denom = 1.0 + c * u;
  return at(p, "a") * g * u * (1.0 + c) / (denom * denom);
}

double lambda_parametrized_s(const NhppParams& p, double t) {
  const double g = at(p, "g");
  const double psi = at(p, "psi");
  const double u = std::exp(-g * t);
  const double denom = 1.0 + psi * u;
  return at(p, "a") * g * u * (1.0 + psi) / (denom * denom);
}

double lambda_dahiya(const NhppParams& p, double t) {
  const double g = at(p, "g");
  const double u = std::exp(-g * t);
  const double denom = 1.0 + u;
  return 2.0 * at(p, "a") * g * u / (denom * denom);
}

double lambda_pareto(const NhppParams& p, double t) {
  const double c = at(p, "c");
  const double g = at(p, "g");
  return at(p, "a") * (g - 1.0) / c * std::pow(1.0 + t / c, -g);
}

double lambda_hyperexponential(const NhppParams& p, double t) {
  const double b1 = at(p, "b1");
  const double g1 = at(p, "g1");
  const double g2 = at(p, "g2");
  return at(p, "a") * (b1 * g1 * std::exp(-g1 * t) +
                       (1.0 - b1) * g2 * std::exp(-g2 * t));
}

double lambda_littlewood(const NhppParams& p, double t) {
  const double c = at(p, "c");
  const double g = at(p, "g");
  return at(p, "a") * g * std::pow(c, g) / std::pow(c + t, g + 1.0);
}

double lambda_parabolic(const NhppParams& p, double t) {
  const double slope =
      at(p, "l") * t * t + at(p, "m") * t + at(p, "n");
  return at(p, "a") * slope * std::exp(-parabolic_poly(p, t));
}

double lambda_logistic(const NhppParams& p, double t) {
  const double g = at(p, "g");
  const double k = at(p, "k");
  const double u = std::exp(-g * t);
  const double denom = 1.0 + k * u;
  return at(p, "a") * g * k * u / (denom * denom);
}

double lambda_pham(const NhppParams& p, double t) {
  const double g = at(p, "g");
  const double d = at(p, "d");
  return at(p, "a") * std::exp(-g * t) *
         (-d + g * (g - d) * t + g * g * d * t * t);
}

double lambda_xie_log(const NhppParams& p, double t) {
  const double g = at(p, "g");
  return at(p, "a") * g * std::pow(std::log1p(t), g - 1.0) / (1.0 + t);
}

double lambda_musa_okumoto(const NhppParams& p, double t) {
  const double a = at(p, "a");
  const double g = at(p, "g");
  return g / (1.0 + a * g * t);
}

// --- validators ---

void check_ag(const NhppParams& p) {
  need_positive(p, "a");
  need_positive(p, "g");
}

void check_duane(const NhppParams& p) { check_ag(p); }

void check_gompertz(const NhppParams& p) {
  need_positive(p, "a");
  const double g = at(p, "g");
  const double c = at(p, "c");
  if (!(g > 0.0 && g < 1.0)) throw DomainError("gompertz needs g in (0, 1)");
  if (gompertz_printed(p)) {
    if (!(c > 0.0)) throw DomainError("printed gompertz needs c > 0");
  } else if (!(c > 0.0 && c < 1.0)) {
    throw DomainError("gompertz needs c in (0, 1)");
  }
}

void check_weibull(const NhppParams& p) {
  check_ag(p);
  need_positive(p, "c");
}

void check_yamada(const NhppParams& p) {
  check_ag(p);
  need_positive(p, "r");
  need_positive(p, "c");
}

void check_inflection_s(const NhppParams& p) {
  check_ag(p);
  if (!(at(p, "c") >= 0.0)) throw DomainError("inflection-s needs c >= 0");
}

void check_parametrized_s(const NhppParams& p) {
  check_ag(p);
  if (!(at(p, "psi") >= 0.0)) throw DomainError("parametrized-s needs psi >= 0");
}

void check_pareto(const NhppParams& p) {
  need_positive(p, "a");
  need_positive(p, "c");
  if (!(at(p, "g") > 1.0)) throw DomainError("pareto needs g > 1");
}

void check_hyperexponential(const NhppParams& p) {
  need_positive(p, "a");
  need_positive(p, "g1");
  need_positive(p, "g2");
  const double b1 = at(p, "b1");
  if (!(b1 >= 0.0 && b1 <= 1.0)) {
    throw DomainError("hyperexponential needs b1 in [0, 1]; b2 = 1 - b1");
  }
}

void check_littlewood(const NhppParams& p) {
  check_ag(p);
  need_positive(p, "c");
}

void check_parabolic(const NhppParams& p) {
  need_positive(p, "a");
  for (const char* key : {"l", "m", "n"}) {
    if (!(at(p, key) >= 0.0)) {
      throw DomainError(std::string("parabolic needs ") + key + " >= 0");
    }
  }
  if (!(at(p, "l") + at(p, "m") + at(p, "n") > 0.0)) {
    throw DomainError("parabolic needs l + m + n > 0");
  }
}

void check_logistic(const NhppParams& p) {
  check_ag(p);
  need_positive(p, "k");
}

void check_pham(const NhppParams& p) {
  check_ag(p);
  const double g = at(p, "g");
  const double d = at(p, "d");
  // The largest symmetric-free box keeping m nondecreasing and below a on
  // [0, 10/g]; outside it the printed form bends back down.
  if (!(d <= 0.0 && d >= -g / 10.0)) {
    throw DomainError("pham needs d in [-g/10, 0]");
  }
}

void check_zhang(const NhppParams& p) {
  need_positive(p, "a");
  need_positive(p, "c");
  need_positive(p, "g");
  if (!(at(p, "alpha") >= 0.0)) throw DomainError("zhang needs alpha >= 0");
  if (!std::isfinite(at(p, "p")) || !std::isfinite(at(p, "beta")) ||
      at(p, "p") == at(p, "beta")) {
    throw DomainError("zhang needs finite p != beta");
  }
}

// --- asymptotes ---

std::optional<double> asym_none(const NhppParams&) { return std::nullopt; }

std::optional<double> asym_a(const NhppParams& p) { return at(p, "a"); }

std::optional<double> asym_gompertz(const NhppParams& p) {
  if (gompertz_printed(p)) return std::nullopt;
  return at(p, "a");
}

std::optional<double> asym_schneidewind(const NhppParams& p) {
  return at(p, "a") / at(p, "g");
}

std::optional<double> asym_saturating_rc(const NhppParams& p) {
  return at(p, "a") * -std::expm1(-at(p, "r") * at(p, "c"));
}

std::optional<double> asym_zhang(const NhppParams& p) {
  const double pb = at(p, "p") - at(p, "beta");
  if (pb <= 0.0) return std::nullopt;
  return at(p, "a") / pb;
}

enum class Scale { Log, Logit, LogMinus1, Free };

struct ParamSpec {
  const char* name;
  Scale scale;
};

struct ModelDef {
  NhppModelId id;
  const char* name;
  std::vector<ParamSpec> params;
  bool default_fittable;
  const char* pinned_during_fit;  // nullptr when every parameter is free
  double (*mean)(const NhppParams&, double);
  double (*lambda)(const NhppParams&, double);  // nullptr: finite difference
  void (*check)(const NhppParams&);
  std::optional<double> (*asym)(const NhppParams&);
};

const std::vector<ModelDef>& registry() {
  static const std::vector<ModelDef> defs = {
      {NhppModelId::Duane, "duane",
       {{"a", Scale::Log}, {"g", Scale::Log}},
       true, nullptr, mean_duane, lambda_duane, check_duane, asym_none},
      {NhppModelId::Gompertz, "gompertz",
       {{"a", Scale::Log}, {"g", Scale::Logit}, {"c", Scale::Logit}},
       false, nullptr, mean_gompertz, lambda_gompertz, check_gompertz,
       asym_gompertz},
      {NhppModelId::GoelOkumoto, "goel-okumoto",
       {{"a", Scale::Log}, {"g", Scale::Log}},
       true, nullptr, mean_go, lambda_go, check_ag, asym_a},
      {NhppModelId::Schneidewind, "schneidewind",
       {{"a", Scale::Log}, {"g", Scale::Log}},
       true, nullptr, mean_schneidewind, lambda_schneidewind, check_ag,
       asym_schneidewind},
      {NhppModelId::Weibull, "weibull",
       {{"a", Scale::Log}, {"g", Scale::Log}, {"c", Scale::Log}},
       true, nullptr, mean_weibull, lambda_weibull, check_weibull, asym_a},
      {NhppModelId::YamadaExponential, "yamada-exponential",
       {{"a", Scale::Log},
        {"g", Scale::Log},
        {"r", Scale::Log},
        {"c", Scale::Log}},
       false, nullptr, mean_yamada, lambda_yamada, check_yamada,
       asym_saturating_rc},
      {NhppModelId::RayleighS, "rayleigh-s",
       {{"a", Scale::Log},
        {"g", Scale::Log},
        {"r", Scale::Log},
        {"c", Scale::Log}},
       true, "c", mean_rayleigh_s, lambda_rayleigh_s, check_yamada,
       asym_saturating_rc},
      {NhppModelId::DelayedS, "delayed-s",
       {{"a", Scale::Log}, {"g", Scale::Log}},
       true, nullptr, mean_delayed_s, lambda_delayed_s, check_ag, asym_a},
      {NhppModelId::InflectionS, "inflection-s",
       {{"a", Scale::Log}, {"g", Scale::Log}, {"c", Scale::Log}},
       true, nullptr, mean_inflection_s, lambda_inflection_s,
       check_inflection_s, asym_a},
      {NhppModelId::ParametrizedS, "parametrized-s",
       {{"a", Scale::Log}, {"g", Scale::Log}, {"psi", Scale::Log}},
       false, nullptr, mean_parametrized_s, lambda_parametrized_s,
       check_parametrized_s, asym_a},
      {NhppModelId::Dahiya, "dahiya",
       {{"a", Scale::Log}, {"g", Scale::Log}},
       true, nullptr, mean_dahiya, lambda_dahiya, check_ag, asym_a},
      {NhppModelId::Pareto, "pareto",
       {{"a", Scale::Log}, {"g", Scale::LogMinus1}, {"c", Scale::Log}},
       true, nullptr, mean_pareto, lambda_pareto, check_pareto, asym_a},
      {NhppModelId::Hyperexponential, "hyperexponential",
       {{"a", Scale::Log},
        {"b1", Scale::Logit},
        {"g1", Scale::Log},
        {"g2", Scale::Log}},
       false, nullptr, mean_hyperexponential, lambda_hyperexponential,
       check_hyperexponential, asym_a},
      {NhppModelId::Littlewood, "littlewood",
       {{"a", Scale::Log}, {"g", Scale::Log}, {"c", Scale::Log}},
       false, nullptr, mean_littlewood, lambda_littlewood, check_littlewood,
       asym_a},
      {NhppModelId::Parabolic, "parabolic",
       {{"a", Scale::Log},
        {"l", Scale::Log},
        {"m", Scale::Log},
        {"n", Scale::Log}},
       false, nullptr, mean_parabolic, lambda_parabolic, check_parabolic,
       asym_a},
      {NhppModelId::Logistic, "logistic",
       {{"a", Scale::Log}, {"g", Scale::Log}, {"k", Scale::Log}},
       true, nullptr, mean_logistic, lambda_logistic, check_logistic, asym_a},
      {NhppModelId::Pham, "pham",
       {{"a", Scale::Log}, {"g", Scale::Log}, {"d", Scale::Free}},
       false, nullptr, mean_pham, lambda_pham, check_pham, asym_a},
      {NhppModelId::Zhang, "zhang",
       {{"a", Scale::Log},
        {"p", Scale::Free},
        {"beta", Scale::Free},
        {"alpha", Scale::Free},
        {"c", Scale::Log},
        {"g", Scale::Log}},
       false, nullptr, mean_zhang, nullptr, check_zhang, asym_zhang},
      {NhppModelId::XieLog, "xie-log",
       {{"a", Scale::Log}, {"g", Scale::Log}},
       true, nullptr, mean_xie_log, lambda_xie_log, check_ag, asym_none},
      {NhppModelId::MusaOkumoto, "musa-okumoto",
       {{"a", Scale::Log}, {"g", Scale::Log}},
       true, nullptr, mean_musa_okumoto, lambda_musa_okumoto, check_ag,
       asym_none},
  };
  return defs;
}

const ModelDef& def_of(NhppModelId id) {
  for (const ModelDef& def : registry()) {
    if (def.id == id) return def;
  }
  throw ValidationError("unknown model id");
}

// Central difference with Richardson extrapolation and step adaptation;
// switches to a second-order forward stencil when t - h would go negative.
double finite_diff_intensity(const ModelDef& def, const NhppParams& p,
                             double t) {
  const auto m = [&](double x) { return def.mean(p, x); };
  const auto estimate = [&](double h) {
    if (t >= h) return (m(t + h) - m(t - h)) / (2.0 * h);
    return (-3.0 * m(t) + 4.0 * m(t + h) - m(t + 2.0 * h)) / (2.0 * h);
  };
  double h = std::max(std::fabs(t), 1.0) * 1e-3;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int step = 0; step < 20; ++step) {
    const double coarse = estimate(h);
    const double fine = estimate(h / 2.0);
    const double value = (4.0 * fine - coarse) / 3.0;
    if (std::isfinite(previous) &&
        std::fabs(value - previous) <=
            1e-7 * std::max(1.0, std::fabs(value))) {
      return value;
    }
    previous = value;
    h /= 2.0;
  }
  return previous;
}

void check_time(double t) {
  if (!(t >= 0.0)) throw ValidationError("time must be nonnegative");
}

// Non-throwing likelihood for optimizer probes.
double log_likelihood_value(const ModelDef& def, const NhppParams& params,
                            const FailureLog& log) {
  try {
    def.check(params);
  } catch (const DomainError&) {
    return kNegInf;
  }
  if (log.kind() == LogKind::EventTimes) {
    double sum = 0.0;
    for (double s : log.cumulative_times()) {
      const double lambda =
          def.lambda ? def.lambda(params, s) : finite_diff_intensity(def, params, s);
      if (!(lambda > 0.0) || !std::isfinite(lambda)) return kNegInf;
      sum += std::log(lambda);
    }
    const double total = def.mean(params, log.total_time());
    if (!std::isfinite(total)) return kNegInf;
    return sum - total;
  }
  double sum = 0.0;
  double prev_edge = 0.0;
  double prev_mean = def.mean(params, 0.0);
  for (const Bin& bin : log.bins()) {
    const double edge = prev_edge + bin.duration;
    const double mean_here = def.mean(params, edge);
    if (!std::isfinite(mean_here)) return kNegInf;
    const double dm = std::max(0.0, mean_here - prev_mean);
    const double count = static_cast<double>(bin.count);
    if (dm == 0.0 && bin.count > 0) return kNegInf;
    if (dm > 0.0) sum += count * std::log(dm) - std::lgamma(count + 1.0);
    sum -= dm;
    prev_edge = edge;
    prev_mean = mean_here;
  }
  return sum;
}

double encode(Scale scale, double x) {
  switch (scale) {
    case Scale::Log: return std::log(x);
    case Scale::Logit: return std::log(x / (1.0 - x));
    case Scale::LogMinus1: return std::log(x - 1.0);
    case Scale::Free: return x;
  }
  return x;
}

double decode(Scale scale, double theta) {
  switch (scale) {
    case Scale::Log: return std::exp(theta);
    case Scale::Logit: return 1.0 / (1.0 + std::exp(-theta));
    case Scale::LogMinus1: return 1.0 + std::exp(theta);
    case Scale::Free: return theta;
  }
  return theta;
}

Scale scale_of(const ModelDef& def, const ParamSpec& spec,
               const NhppParams& start) {
  // The printed Gompertz exponent frees c from the unit interval.
  if (def.id == NhppModelId::Gompertz && std::string(spec.name) == "c" &&
      gompertz_printed(start)) {
    return Scale::Log;
  }
  return spec.scale;
}

NhppParams heuristic_start(const ModelDef& def, const FailureLog& log) {
  const double n = std::max<double>(1.0, static_cast<double>(log.error_count()));
  const double t_total = std::max(log.total_time(), 1e-9);
  switch (def.id) {
    case NhppModelId::GoelOkumoto:
    case NhppModelId::DelayedS:
    case NhppModelId::Dahiya:
      return {{"a", 1.5 * n}, {"g", 1.0 / t_total}};
    case NhppModelId::InflectionS:
      return {{"a", 1.5 * n}, {"g", 1.0 / t_total}, {"c", 1.0}};
    case NhppModelId::Weibull:
      return {{"a", 1.5 * n}, {"g", 1.0 / t_total}, {"c", 1.0}};
    case NhppModelId::Logistic:
      return {{"a", 1.5 * n}, {"g", 1.0 / t_total}, {"k", 1.0}};
    case NhppModelId::Schneidewind:
      return {{"a", 1.5 * n / t_total}, {"g", 1.0 / t_total}};
    case NhppModelId::MusaOkumoto: {
      const double a0 = 2.0 / n;
      return {{"a", a0}, {"g", std::expm1(a0 * n) / (a0 * t_total)}};
    }
    case NhppModelId::Duane:
      return {{"a", n / std::sqrt(t_total)}, {"g", 0.5}};
    case NhppModelId::XieLog:
      return {{"a", n / std::log1p(t_total)}, {"g", 1.0}};
    case NhppModelId::RayleighS: {
      const double saturation = -std::expm1(-(-std::expm1(-1.0)));
      return {{"a", 1.5 * n / saturation},
              {"g", 2.0 / (t_total * t_total)},
              {"r", 1.0},
              {"c", 1.0}};
    }
    case NhppModelId::Pareto:
      return {{"a", 1.5 * n}, {"g", 2.0}, {"c", t_total / 2.0}};
    default:
      throw ValidationError("opt-in model requires starting point");
  }
}

}  // namespace

const std::vector<NhppModelId>& all_models() {
  static const std::vector<NhppModelId> ids = [] {
    std::vector<NhppModelId> out;
    for (const ModelDef& def : registry()) out.push_back(def.id);
    return out;
  }();
  return ids;
}

std::string model_name(NhppModelId model) { return def_of(model).name; }

NhppModelId model_from_name(const std::string& name) {
  for (const ModelDef& def : registry()) {
    if (def.name == name) return def.id;
  }
  throw ValidationError("unknown NHPP model '" + name + "'");
}

const std::vector<std::string>& param_names(NhppModelId model) {
  static std::map<NhppModelId, std::vector<std::string>> cache = [] {
    std::map<NhppModelId, std::vector<std::string>> out;
    for (const ModelDef& def : registry()) {
      std::vector<std::string> names;
      for (const ParamSpec& spec : def.params) names.emplace_back(spec.name);
      out[def.id] = std::move(names);
    }
    return out;
  }();
  return cache.at(model);
}

bool default_fittable(NhppModelId model) {
  return def_of(model).default_fittable;
}

void validate_params(NhppModelId model, const NhppParams& params) {
  const ModelDef& def = def_of(model);
  for (const ParamSpec& spec : def.params) {
    if (!params.count(spec.name)) {
      throw DomainError(std::string(def.name) + " needs parameter '" +
                        spec.name + "'");
    }
  }
  for (const auto& [key, value] : params) {
    (void)value;
    const bool known =
        std::any_of(def.params.begin(), def.params.end(),
                    [&](const ParamSpec& spec) { return key == spec.name; }) ||
        (def.id == NhppModelId::Gompertz && key == "printed_exponent");
    if (!known) {
      throw DomainError(std::string(def.name) + " has no parameter '" + key +
                        "'");
    }
  }
  def.check(params);
}

double mean_value(NhppModelId model, const NhppParams& params, double t) {
  check_time(t);
  validate_params(model, params);
  return def_of(model).mean(params, t);
}

double intensity(NhppModelId model, const NhppParams& params, double t) {
  check_time(t);
  validate_params(model, params);
  const ModelDef& def = def_of(model);
  return def.lambda ? def.lambda(params, t)
                    : finite_diff_intensity(def, params, t);
}

std::optional<double> asymptote(NhppModelId model, const NhppParams& params) {
  validate_params(model, params);
  return def_of(model).asym(params);
}

double log_likelihood(NhppModelId model, const NhppParams& params,
                      const FailureLog& log) {
  validate_params(model, params);
  return log_likelihood_value(def_of(model), params, log);
}

NhppFit fit(NhppModelId model, const FailureLog& log,
            const NhppFitOptions& options) {
  const ModelDef& def = def_of(model);
  if (log.kind() == LogKind::EventTimes) {
    if (log.error_count() < 5) {
      throw InsufficientData("event-times fit needs at least 5 events");
    }
  } else {
    std::size_t nonempty = 0;
    for (const Bin& bin : log.bins()) nonempty += bin.count > 0;
    if (nonempty < 3) {
      throw InsufficientData("grouped fit needs at least 3 nonempty bins");
    }
  }
  if (!def.default_fittable && !options.start) {
    throw ValidationError("opt-in model requires starting point");
  }

  NhppParams start_params =
      options.start ? *options.start : heuristic_start(def, log);
  validate_params(model, start_params);

  // Free coordinates in declaration order; pinned ones stay at the start.
  std::vector<const ParamSpec*> free_specs;
  for (const ParamSpec& spec : def.params) {
    if (def.pinned_during_fit &&
        std::string(spec.name) == def.pinned_during_fit) {
      continue;
    }
    free_specs.push_back(&spec);
  }
  std::vector<double> start(free_specs.size());
  for (std::size_t j = 0; j < free_specs.size(); ++j) {
    start[j] = encode(scale_of(def, *free_specs[j], start_params),
                      start_params.at(free_specs[j]->name));
  }

  const auto decode_theta = [&](const std::vector<double>& theta) {
    NhppParams p = start_params;
    for (std::size_t j = 0; j < free_specs.size(); ++j) {
      p[free_specs[j]->name] =
          decode(scale_of(def, *free_specs[j], start_params), theta[j]);
    }
    return p;
  };
  const ObjectiveFn objective = [&](const std::vector<double>& theta) {
    return -log_likelihood_value(def, decode_theta(theta), log);
  };

  MultiStartOptions ms;
  ms.restarts = options.restarts;
  const MultiStartResult result =
      multi_start_minimize(objective, start, options.seed, ms);
  if (!std::isfinite(result.best.fval)) {
    throw NonConvergence(std::string(def.name) +
                         " fit found no finite-likelihood region");
  }
  if (!def.default_fittable && result.agreeing_restarts(1e-2) < 2) {
    throw Unidentifiable(
        std::string(def.name) +
        " restarts scatter beyond 1e-2 in log-likelihood; the data do not "
        "pin these parameters down");
  }
  if (result.agreeing_restarts(1e-4) < 2) {
    throw NonConvergence(std::string(def.name) +
                         " restarts disagree beyond 1e-4 in log-likelihood");
  }

  NhppFit fit_result;
  fit_result.model = model;
  fit_result.params = decode_theta(result.best.x);
  fit_result.log_lik = -result.best.fval;
  fit_result.fitted_on = log.kind();
  fit_result.converged = result.best.converged;
  fit_result.iterations = result.total_iterations;
  fit_result.n_free_params = free_specs.size();
  fit_result.data_horizon = log.total_time();
  fit_result.events = log.error_count();
  return fit_result;
}

Prediction predict(NhppModelId model, const NhppParams& params, double horizon,
                   double at) {
  if (!(horizon >= 0.0)) throw ValidationError("horizon must be nonnegative");
  check_time(at);
  validate_params(model, params);
  const ModelDef& def = def_of(model);
  Prediction out;
  const double here = def.mean(params, at);
  out.expected_new = def.mean(params, at + horizon) - here;
  out.p_no_failure = std::exp(-out.expected_new);
  if (const auto a = def.asym(params)) out.remaining = *a - here;
  return out;
}

Prediction predict(const NhppFit& fit, double horizon, double at) {
  return predict(fit.model, fit.params, horizon, at);
}

void write_fitted_curve(NhppModelId model, const NhppParams& params,
                        const FailureLog& log,
                        const std::vector<double>& grid, std::ostream& out) {
  validate_params(model, params);
  const ModelDef& def = def_of(model);
  std::vector<double> event_marks;
  if (log.kind() == LogKind::EventTimes) {
    event_marks = log.cumulative_times();
  }
  out << std::setprecision(17);
  out << "t,m_fitted,lambda_fitted,cumulative_observed\n";
  for (double t : grid) {
    check_time(t);
    double observed = 0.0;
    if (log.kind() == LogKind::EventTimes) {
      observed = static_cast<double>(
          std::upper_bound(event_marks.begin(), event_marks.end(), t) -
          event_marks.begin());
    } else {
      double edge = 0.0;
      for (const Bin& bin : log.bins()) {
        edge += bin.duration;
        if (edge > t + 1e-12) break;
        observed += static_cast<double>(bin.count);
      }
    }
    const double lambda = def.lambda ? def.lambda(params, t)
                                     : finite_diff_intensity(def, params, t);
    out << t << "," << def.mean(params, t) << "," << lambda << ","
        << observed << "\n";
  }
}

}  // namespace relgrowth::nhpp
