#include "abp/normalization.hpp"

#include <algorithm>
#include <cmath>

#include "abp/errors.hpp"
#include "abp/geometry.hpp"

namespace abp {

NormalizationSpec NormalizationSpec::l1() { return {}; }

NormalizationSpec NormalizationSpec::lq(double q) {
  if (!(q >= 1.0)) throw ConfigError("norm.kind", "Lq needs q >= 1");
  NormalizationSpec s;
  s.kind = Kind::Lq;
  s.q = q;
  return s;
}

NormalizationSpec NormalizationSpec::point(std::vector<double> z0) {
  NormalizationSpec s;
  s.kind = Kind::Point;
  s.z0 = std::move(z0);
  return s;
}

NormalizationSpec NormalizationSpec::min(int smoothing_index) {
  NormalizationSpec s;
  s.kind = Kind::Min;
  s.smoothing_index = smoothing_index;
  return s;
}

NormalizationSpec NormalizationSpec::max(int smoothing_index) {
  NormalizationSpec s;
  s.kind = Kind::Max;
  s.smoothing_index = smoothing_index;
  return s;
}

NormalizationSpec NormalizationSpec::parse(const std::string& text) {
  if (text == "l1") return l1();
  if (text == "min") return min();
  if (text == "max") return max();
  if (text.rfind("lq:", 0) == 0) {
    try {
      return lq(std::stod(text.substr(3)));
    } catch (const std::invalid_argument&) {
      throw ConfigError("norm.kind", "cannot parse q in '" + text + "'");
    }
  }
  if (text.rfind("point:", 0) == 0) {
    std::vector<double> z0;
    std::string rest = text.substr(6);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t next = rest.find(',', pos);
      std::string tok = rest.substr(pos, next == std::string::npos ? next : next - pos);
      try {
        z0.push_back(std::stod(tok));
      } catch (const std::invalid_argument&) {
        throw ConfigError("norm.kind", "cannot parse z0 in '" + text + "'");
      }
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (z0.empty()) throw ConfigError("norm.kind", "point: needs coordinates");
    return point(std::move(z0));
  }
  throw ConfigError("norm.kind", "unknown normalization '" + text +
                                     "' (expected l1, lq:<q>, point:<z0>, min, max)");
}

std::string NormalizationSpec::to_string() const {
  switch (kind) {
    case Kind::L1: return "l1";
    case Kind::Lq: return "lq:" + std::to_string(q);
    case Kind::Point: {
      std::string s = "point:";
      for (std::size_t i = 0; i < z0.size(); ++i)
        s += (i ? "," : "") + std::to_string(z0[i]);
      return s;
    }
    case Kind::Min: return "min";
    case Kind::Max: return "max";
  }
  return "?";
}

namespace {

void require_positive(const GridFunction& f) {
  if (!f.all_positive())
    throw DomainError("normalization: grid function must be strictly positive");
}

// (mean f^q)^(1/q) evaluated in log space so large q does not overflow.
double lq_mean(const GridFunction& f, double q) {
  double mlog = -1e300;
  for (double x : f.v) mlog = std::max(mlog, std::log(x));
  std::vector<double> scaled(f.v.size());
  for (std::size_t i = 0; i < f.v.size(); ++i)
    scaled[i] = std::exp(q * (std::log(f.v[i]) - mlog));
  double mean = pairwise_mean(scaled);
  return std::exp(mlog + std::log(mean) / q);
}

} // namespace

double n_value(const NormalizationSpec& spec, const GridFunction& f) {
  require_positive(f);
  switch (spec.kind) {
    case NormalizationSpec::Kind::L1:
      return f.mean();
    case NormalizationSpec::Kind::Lq:
      return spec.q == 1.0 ? f.mean() : lq_mean(f, spec.q);
    case NormalizationSpec::Kind::Point:
      return f.interp(spec.z0);
    case NormalizationSpec::Kind::Min: {
      if (spec.smoothing_index <= 0) return f.min();
      GridFunction inv = f;
      for (double& x : inv.v) x = 1.0 / x;
      return 1.0 / lq_mean(inv, static_cast<double>(spec.smoothing_index));
    }
    case NormalizationSpec::Kind::Max:
      return spec.smoothing_index <= 0
                 ? f.max()
                 : lq_mean(f, static_cast<double>(spec.smoothing_index));
  }
  throw DomainError("n_value: unknown kind");
}

GridFunction normalize(const NormalizationSpec& spec, const GridFunction& f) {
  double n = n_value(spec, f);
  GridFunction out = f;
  for (double& x : out.v) x /= n;
  return out;
}

GridFunction prob_density(const GridFunction& f) {
  require_positive(f);
  double n = f.mean();
  GridFunction out = f;
  for (double& x : out.v) x /= n;
  return out;
}

} // namespace abp
