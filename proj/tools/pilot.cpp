// Recomputes the Monte Carlo fixtures frozen in the acceptance test, on a
// seed the acceptance run never uses.

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "smlab/schramm_stats.hpp"

using namespace smlab;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 424242;

  for (int n : {500, 1000, 2000}) {
    const auto [x0, y0] = default_start(n);
    const auto tr = expected_s_trajectory(x0, y0, 10 * n, 2000, derive_seed(seed, static_cast<std::uint64_t>(n)), 10 * n);
    std::printf("beta n=%d mean_s/n=%.17g se=%.17g meet=%.6f\n", n, tr.mean_s.back() / n, tr.se_s.back() / n,
                tr.meet_fraction.back());
  }

  const int n = 100;
  const auto t_mix_bound = static_cast<std::int64_t>(std::ceil(2 * n * std::log(n)));
  const auto d = mc_distance_curve(n, {115, 230, 345, 461, t_mix_bound}, 20000, derive_seed(seed, 100));
  for (const auto& e : d) std::printf("mc_d n=100 t=%lld value=%.17g se=%.17g\n", static_cast<long long>(e.t), e.value, e.se);

  const auto r = rootn_check(10000, 2000, derive_seed(seed, 10000), {90000, 120000});
  for (const auto& e : r)
    std::printf("rootn t=%lld p=%.6f [%.6f, %.6f]\n", static_cast<long long>(e.t), e.p, e.lo, e.hi);

  for (double eps : {1.0 / 64, 1.0 / 128}) {
    const auto s = sbig_check(10000, default_j(10000), eps, 0.5, 400, derive_seed(seed, 7));
    std::printf("sbig eps=%.6f accepted=%lld failure=%.6f [%.6f, %.6f]\n", eps, static_cast<long long>(s.accepted), s.failure.p,
                s.failure.lo, s.failure.hi);
  }

  const auto c = pd1_comparison(10000, 10000, 1000, 1, derive_seed(seed, 1), 100000);
  std::printf("pd1 walk=%.6f+-%.6f ref=%.6f+-%.6f ks=%.6f\n", c.walk[0].mean, c.walk[0].se, c.reference[0].mean, c.reference[0].se,
              c.ks[0]);
}
