#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace starksim {

// Worker count: STARKSIM_THREADS if set (>=1), else hardware concurrency.
inline int thread_count() {
  if (const char* env = std::getenv("STARKSIM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {
inline constexpr int kEnsembleBlock = 64;
}

// Deterministic blocked map-reduce over donor indices. Donors are grouped in
// fixed blocks of 64; each block accumulates sequentially in index order and
// blocks combine over a fixed binary tree, so the result is bit-identical for
// any worker count.
template <typename Acc>
Acc ensemble_accumulate(int count, const std::function<Acc()>& zero,
                        const std::function<void(Acc&, int)>& add_donor,
                        const std::function<Acc(const Acc&, const Acc&)>& plus) {
  if (count <= 0) return zero();
  const int nblocks = (count + detail::kEnsembleBlock - 1) / detail::kEnsembleBlock;
  std::vector<Acc> partials;
  partials.reserve(nblocks);
  for (int b = 0; b < nblocks; ++b) partials.push_back(zero());

  auto run_block = [&](int b) {
    const int lo = b * detail::kEnsembleBlock;
    const int hi = std::min(count, lo + detail::kEnsembleBlock);
    for (int i = lo; i < hi; ++i) add_donor(partials[b], i);
  };

  const int workers = std::min(thread_count(), nblocks);
  if (workers <= 1) {
    for (int b = 0; b < nblocks; ++b) run_block(b);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1)) {
          run_block(b);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  // fixed binary combine tree over block order
  std::function<Acc(int, int)> reduce = [&](int lo, int hi) -> Acc {
    if (hi - lo == 1) return partials[lo];
    const int mid = lo + (hi - lo) / 2;
    return plus(reduce(lo, mid), reduce(mid, hi));
  };
  return reduce(0, nblocks);
}

}  // namespace starksim
