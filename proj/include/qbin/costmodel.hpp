#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qbin {

// Analytical model parameters. beta = C_e/C_p and gamma = C_e/C_com are kept
// consistent with the raw per-unit costs; log is base 2 throughout (index
// depth), isolated in model_log().
struct CostParams {
  double alpha = 0.0;        // sensitive share of the dataset
  double beta = 1000.0;      // C_e / C_p
  double gamma = 25000.0;    // C_e / C_com
  double rho = 0.0;          // selectivity; defaults to 1/|NS| values
  double total_tuples = 0;   // D
  double ns_value_count = 0; // |NS| distinct values
  double sb_size = 0;        // |SB|, defaults ceil(sqrt(|NS|))
  double nsb_size = 0;       // |NSB|, defaults ceil(sqrt(|NS|))
  double c_p = 1.0;
  double c_e = 0.0;          // beta * c_p unless supplied
  double c_com = 0.0;        // c_e / gamma unless supplied
};

CostParams make_params(double alpha, double beta, double gamma, double total_tuples,
                       double ns_value_count, double rho = -1.0, double sb_size = -1.0,
                       double nsb_size = -1.0);

double model_log(double d);

// x selection queries on plaintext: x (log(D) C_p + rho D C_com).
double cost_plain(double x, double d, const CostParams& p);
// x selection queries on encrypted data, amortized single scan:
// C_e D + rho x D C_com.
double cost_crypt(double x, double d, const CostParams& p);

struct EtaResult {
  double full = 0;        // unreduced ratio of the two costs
  double simplified = 0;  // alpha + rho (|SB| + |NSB|) / gamma
  double abs_diff = 0;
  double rel_diff = 0;
};

EtaResult eta(const CostParams& p);

// eta_simplified < 1, in closed form: alpha < 1 - 2 rho sqrt(|NS|) / gamma.
bool break_even_holds(const CostParams& p);
double break_even_alpha(const CostParams& p);

struct CurvePoint {
  double gamma = 0;
  double alpha = 0;
  double eta = 0;
};

std::vector<CurvePoint> eta_curve(double rho, const std::vector<double>& alphas,
                                  const std::vector<double>& gammas, double ns_value_count,
                                  double total_tuples, double beta = 1000.0);

std::string curve_csv(const std::vector<CurvePoint>& points);

// Counters measured by the executor, reduced to model units.
struct EmpiricalCounters {
  double queries = 0;
  double encrypted_rows_scanned = 0;  // total over the workload
  double rows_transferred = 0;        // encrypted + plain rows returned
  double total_tuples = 0;            // D
  double plain_rows = 0;              // |NS| tuples
};

// Ratio of the measured QB cost to the modeled all-encrypted cost, using the
// model's per-unit weights.
double eta_empirical(const EmpiricalCounters& c, const CostParams& p);

}  // namespace qbin
