#include "drumlab/perturbation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "drumlab/solver.hpp"

namespace drumlab {

PerturbationResult perturb_energy(const BasisSpec& spec,
                                  const EffectiveDensity& s,
                                  const MultiIndex& n, int k_cutoff) {
  spec.validate(n);
  if (k_cutoff <= 0) {
    int max_idx = 1;
    for (int i : n.indices) max_idx = std::max(max_idx, i);
    k_cutoff = 3 * max_idx;
  }

  BasisSpec internal = spec;
  internal.cutoff = k_cutoff;
  internal.validate(n);  // n inside the truncation
  if (internal.size() > 4096)
    throw SolverError("internal perturbation basis of " +
                      std::to_string(internal.size()) + " states exceeds 4096; "
                      "lower k_cutoff");

  const std::vector<MultiIndex> states = enumerate_states(internal);
  const auto nstates = static_cast<std::ptrdiff_t>(states.size());
  // sigma matrix: <i|SigmaBar|j> minus the identity.
  Eigen::MatrixXd sig = field_matrix(internal, s, 0);
  sig = ((sig + sig.transpose()) * 0.5).eval();
  sig.diagonal().array() -= 1.0;

  std::ptrdiff_t self = -1;
  Eigen::VectorXd eps(nstates);
  for (std::ptrdiff_t i = 0; i < nstates; ++i) {
    eps(i) = mode_energy(internal, states[i]);
    if (states[i] == n) self = i;
  }

  PerturbationResult res;
  res.state = n;
  const double en = eps(self);
  const double snn = sig(self, self);

  const double sigma_diag = 1.0 + snn;  // <n|SigmaBar|n>
  if (sigma_diag <= 0.0)
    throw EvalError("nonpositive diagonal density element <n|SigmaBar|n>");
  res.resummed = en / sigma_diag;

  std::vector<std::ptrdiff_t> degenerate_block;
  for (std::ptrdiff_t i = 0; i < nstates; ++i)
    if (nearly_degenerate(en, eps(i))) degenerate_block.push_back(i);

  if (degenerate_block.size() > 1) {
    // First-order degenerate theory: diagonalize sigma on the block.
    const auto m = static_cast<std::ptrdiff_t>(degenerate_block.size());
    Eigen::MatrixXd block(m, m);
    for (std::ptrdiff_t a = 0; a < m; ++a)
      for (std::ptrdiff_t b = 0; b < m; ++b)
        block(a, b) = sig(degenerate_block[a], degenerate_block[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);

    std::ptrdiff_t self_in_block =
        std::find(degenerate_block.begin(), degenerate_block.end(), self) -
        degenerate_block.begin();
    std::ptrdiff_t best = 0;
    for (std::ptrdiff_t c = 1; c < m; ++c)
      if (std::abs(es.eigenvectors()(self_in_block, c)) >
          std::abs(es.eigenvectors()(self_in_block, best)))
        best = c;

    res.degenerate = true;
    for (std::ptrdiff_t c = 0; c < m; ++c)
      res.degenerate_first_order.push_back(-en * es.eigenvalues()(c));
    std::sort(res.degenerate_first_order.begin(),
              res.degenerate_first_order.end());
    res.orders = {en, -en * es.eigenvalues()(best)};
    res.partial_sums = {en, en + res.orders[1]};
    return res;
  }

  // Nondegenerate sums, fixed state order for reproducibility.
  double sum_w = 0.0;   // sum <n|s|k>^2 / w_nk
  double sum_w2 = 0.0;  // sum <n|s|k>^2 / w_nk^2
  double tail_w = 0.0;  // contribution of the top energy decade to sum_w
  const double eps_max = eps.maxCoeff();
  for (std::ptrdiff_t k = 0; k < nstates; ++k) {
    if (k == self) continue;
    const double w = en - eps(k);
    const double z = sig(self, k) * sig(self, k);
    sum_w += z / w;
    sum_w2 += z / (w * w);
    if (eps(k) > eps_max / 10.0) tail_w += z / w;
  }

  std::vector<double> inner(nstates, 0.0);  // sum_m s_km s_mn / w_nm per k
  for (std::ptrdiff_t k = 0; k < nstates; ++k) {
    if (k == self) continue;
    double acc = 0.0;
    for (std::ptrdiff_t m = 0; m < nstates; ++m) {
      if (m == self) continue;
      acc += sig(k, m) * sig(self, m) / (en - eps(m));
    }
    inner[k] = acc;
  }
  double dbl = 0.0;  // sum_k s_nk inner_k / w_nk
  for (std::ptrdiff_t k = 0; k < nstates; ++k) {
    if (k == self) continue;
    dbl += sig(self, k) * inner[k] / (en - eps(k));
  }

  const double e1 = -en * snn;
  const double e2 = en * snn * snn + en * en * sum_w;
  const double e3 = -en * snn * snn * snn + en * en * en * snn * sum_w2 -
                    3.0 * en * en * snn * sum_w - en * en * en * dbl;

  res.orders = {en, e1, e2, e3};
  res.partial_sums = {en, en + e1, en + e1 + e2, en + e1 + e2 + e3};
  // Ignore corrections that are pure roundoff relative to eps_n.
  res.sum_convergence_warning = std::abs(e2) > 1e-14 * en &&
                                std::abs(en * en * tail_w) > 1e-6 * std::abs(e2);
  return res;
}

double resummed_energy(const BasisSpec& spec, const EffectiveDensity& s,
                       const MultiIndex& n, int quad_order) {
  const double diag = matrix_element(spec, n, n, s, quad_order);
  if (diag <= 0.0)
    throw EvalError("nonpositive diagonal density element <n|SigmaBar|n>");
  return mode_energy(spec, n) / diag;
}

}  // namespace drumlab
