#include "qbin/costmodel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qbin {

double model_log(double d) { return std::log2(d); }

CostParams make_params(double alpha, double beta, double gamma, double total_tuples,
                       double ns_value_count, double rho, double sb_size, double nsb_size) {
  if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must be in [0,1]");
  if (beta < 1) throw std::invalid_argument("beta must be >= 1");
  if (gamma <= 0) throw std::invalid_argument("gamma must be positive");
  if (total_tuples < 1) throw std::invalid_argument("total tuple count must be >= 1");
  CostParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.total_tuples = total_tuples;
  p.ns_value_count = ns_value_count;
  p.rho = rho > 0 ? rho : 1.0 / ns_value_count;
  double root = std::ceil(std::sqrt(ns_value_count));
  p.sb_size = sb_size > 0 ? sb_size : root;
  p.nsb_size = nsb_size > 0 ? nsb_size : root;
  p.c_p = 1.0;
  p.c_e = beta * p.c_p;
  p.c_com = p.c_e / gamma;
  return p;
}

double cost_plain(double x, double d, const CostParams& p) {
  if (x < 0 || d < 1) throw std::invalid_argument("cost_plain: x >= 0 and d >= 1 required");
  return x * (model_log(d) * p.c_p + p.rho * d * p.c_com);
}

double cost_crypt(double x, double d, const CostParams& p) {
  if (x < 0 || d < 1) throw std::invalid_argument("cost_crypt: x >= 0 and d >= 1 required");
  return p.c_e * d + p.rho * x * d * p.c_com;
}

EtaResult eta(const CostParams& p) {
  if (p.gamma <= 0) throw std::invalid_argument("eta: gamma must be positive");
  // raw unit costs must agree with the stated ratios
  if (std::fabs(p.c_e - p.beta * p.c_p) > 1e-9 * p.c_e ||
      std::fabs(p.c_com - p.c_e / p.gamma) > 1e-9 * std::max(p.c_com, 1e-300)) {
    throw std::invalid_argument("eta: c_e/c_p/c_com disagree with beta and gamma");
  }
  EtaResult r;
  r.simplified = p.alpha + p.rho * (p.sb_size + p.nsb_size) / p.gamma;

  double s_tuples = p.alpha * p.total_tuples;
  double ns_tuples = p.total_tuples - s_tuples;
  double denominator = cost_crypt(1.0, p.total_tuples, p);
  double numerator = 0.0;
  if (s_tuples >= 1) numerator += cost_crypt(p.sb_size, s_tuples, p);
  if (ns_tuples >= 1) numerator += cost_plain(p.nsb_size, ns_tuples, p);
  r.full = numerator / denominator;

  r.abs_diff = std::fabs(r.full - r.simplified);
  r.rel_diff = r.simplified != 0 ? r.abs_diff / r.simplified : r.abs_diff;
  return r;
}

double break_even_alpha(const CostParams& p) {
  return 1.0 - 2.0 * p.rho * std::sqrt(p.ns_value_count) / p.gamma;
}

bool break_even_holds(const CostParams& p) { return p.alpha < break_even_alpha(p); }

std::vector<CurvePoint> eta_curve(double rho, const std::vector<double>& alphas,
                                  const std::vector<double>& gammas, double ns_value_count,
                                  double total_tuples, double beta) {
  std::vector<CurvePoint> points;
  points.reserve(alphas.size() * gammas.size());
  for (double g : gammas) {
    for (double a : alphas) {
      CostParams p = make_params(a, beta, g, total_tuples, ns_value_count, rho);
      points.push_back({g, a, eta(p).simplified});
    }
  }
  return points;
}

std::string curve_csv(const std::vector<CurvePoint>& points) {
  std::ostringstream os;
  os << "gamma,alpha,eta\n";
  os.precision(12);
  for (const CurvePoint& p : points) {
    os << p.gamma << "," << p.alpha << "," << p.eta << "\n";
  }
  return os.str();
}

double eta_empirical(const EmpiricalCounters& c, const CostParams& p) {
  if (c.queries < 1 || c.total_tuples < 1) {
    throw std::invalid_argument("eta_empirical needs at least one query and one tuple");
  }
  // Measured QB work per query against the modeled all-encrypted baseline.
  double qb = p.c_e * (c.encrypted_rows_scanned / c.queries) +
              p.c_com * (c.rows_transferred / c.queries) +
              p.c_p * model_log(std::max(2.0, c.plain_rows)) * p.nsb_size;
  double crypt = p.c_e * c.total_tuples + p.rho * c.total_tuples * p.c_com;
  return qb / crypt;
}

}  // namespace qbin
