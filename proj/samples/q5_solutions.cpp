// Walks lambda2 through the q = 5 quartic regimes at lambda1 = 1/2 and lists
// the fixed points of the binary-tree mode map at each stop.

#include <cstdio>

#include "clockpt/clockpt.hpp"

int main() {
  using namespace clockpt;
  for (double lambda2 : {0.30, 0.38, 0.45, 0.499, 0.5}) {
    const QuarticAnalysis quartic = classify_quartic(q5_quartic_coeffs(lambda2));
    const SolutionSet set = q5_solutions_at_critical(lambda2);
    std::printf("lambda2 = %.3f  %-16s  %d nontrivial\n", lambda2, std::string(to_string(quartic.structure)).c_str(),
                set.n_nontrivial());
    for (std::size_t k = 0; k < set.solutions.size(); ++k) {
      std::printf("    alpha = (% .9f, % .9f)  residual %.1e\n", set.solutions[k].alpha1, set.solutions[k].alpha2,
                  set.residuals[k]);
    }
  }

  // the same fixed points reached by iterating the tree recursion from e_1
  const TransferSpec spec = TransferSpec::from_modes(5, {0.5, 0.45});
  const ProbeResult probe = pt_probe(spec, Cayley{2});
  const SymmetricDist root = SymmetricDist::from_probabilities(probe.final_marginal);
  std::printf("\nplus boundary at (0.5, 0.45): %s, root modes (%.6f, %.6f)\n",
              std::string(to_string(probe.verdict)).c_str(), root.mode(1), root.mode(2));
}
