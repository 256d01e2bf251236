#include "dsnls/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "dsnls/errors.hpp"

namespace ds::detail {

namespace {

using PlanKey = std::tuple<int, std::size_t, std::size_t, std::size_t, int>;

struct PlanCache {
  std::mutex mu;
  std::map<PlanKey, fftw_plan> plans;

  ~PlanCache() {
    for (auto& kv : plans) fftw_destroy_plan(kv.second);
  }

  // The planner is not thread safe; execution of a finished plan is.
  fftw_plan get(const GridSpec& g, int sign) {
    const PlanKey key{g.dim, g.points[0], g.points[1], g.points[2], sign};
    std::lock_guard<std::mutex> lock(mu);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    int dims[3] = {int(g.points[0]), int(g.points[1]), int(g.points[2])};
    auto* scratch = fftw_alloc_complex(g.size());
    fftw_plan p = fftw_plan_dft(g.dim, dims, scratch, scratch, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (!p) throw NumericalError("FFTW failed to create a plan");
    plans.emplace(key, p);
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void fft_inplace(const GridSpec& g, std::span<cplx> data, int sign) {
  if (data.size() != g.size()) throw ArgumentError("fft: buffer size does not match grid");
  fftw_plan p = cache().get(g, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, buf, buf);
}

}  // namespace ds::detail
