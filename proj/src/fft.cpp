#include "bosestab/fft.hpp"

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace bosestab {
namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

class Plan2D {
 public:
  explicit Plan2D(int n) : n_(n), size_(static_cast<size_t>(n) * n) {
    std::lock_guard lock(planner_mutex());
    buffer_ = fftw_alloc_complex(size_);
    // FFTW_ESTIMATE keeps the plan (and therefore rounding) independent of timing.
    forward_ = fftw_plan_dft_2d(n, n, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_2d(n, n, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Plan2D() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buffer_);
  }
  Plan2D(const Plan2D&) = delete;
  Plan2D& operator=(const Plan2D&) = delete;

  Eigen::ArrayXcd run(const Eigen::ArrayXcd& in, bool forward) {
    std::memcpy(buffer_, in.data(), size_ * sizeof(fftw_complex));
    fftw_execute(forward ? forward_ : backward_);
    Eigen::ArrayXcd out(static_cast<Eigen::Index>(size_));
    std::memcpy(static_cast<void*>(out.data()), buffer_, size_ * sizeof(fftw_complex));
    return out;
  }

 private:
  int n_;
  size_t size_;
  fftw_complex* buffer_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

Plan2D& plan_for(int n) {
  thread_local std::map<int, std::unique_ptr<Plan2D>> plans;
  auto& slot = plans[n];
  if (!slot) slot = std::make_unique<Plan2D>(n);
  return *slot;
}

}  // namespace

Eigen::ArrayXcd fft_forward(const Grid2D& g, const Eigen::ArrayXcd& f) {
  return plan_for(g.n).run(f, true);
}

Eigen::ArrayXcd fft_inverse(const Grid2D& g, const Eigen::ArrayXcd& F) {
  Eigen::ArrayXcd out = plan_for(g.n).run(F, false);
  out /= static_cast<double>(g.size());
  return out;
}

}  // namespace bosestab
