// Prints the q = 4 transition line next to a coarse regime map.

#include <cstdio>

#include "clockpt/clockpt.hpp"

int main() {
  using namespace clockpt;
  std::printf("lambda1   lambda2 threshold\n");
  for (double l1 : {0.47, 0.48, 0.49, 0.5}) std::printf("%.2f      %.6f\n", l1, q4_critical_lambda2(l1));

  const int res = 25;
  const auto grid = sweep(4, Range{0.0, 0.6}, Range{0.0, 0.6}, res);
  std::printf("\nrows: lambda2 from 0.6 (top) to 0; columns: lambda1 from 0 to 0.6\n");
  std::printf(". no PT   o PT without RPT   # PT and RPT   (blank) infeasible\n\n");
  for (int j = res - 1; j >= 0; --j) {
    for (int i = 0; i < res; ++i) {
      const Regime r = grid[static_cast<std::size_t>(i * res + j)].regime;
      std::putchar(r == Regime::NoPT ? '.' : r == Regime::PTNotRPT ? 'o' : r == Regime::PTAndRPT ? '#' : ' ');
    }
    std::putchar('\n');
  }
}
