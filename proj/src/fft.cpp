#include "dirlab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace dirlab {
namespace {

std::mutex plan_mutex;

fftw_plan cached_plan(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> plans;
  std::lock_guard lock(plan_mutex);
  auto [it, inserted] = plans.try_emplace({n, sign}, nullptr);
  if (inserted) {
    std::vector<Complex> scratch(n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    it->second = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  return it->second;
}

void run(std::span<Complex> data, int sign) {
  if (data.empty()) return;
  fftw_plan plan = cached_plan(static_cast<int>(data.size()), sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace

void fft_forward(std::span<Complex> data) { run(data, FFTW_FORWARD); }
void fft_inverse(std::span<Complex> data) { run(data, FFTW_BACKWARD); }

std::vector<Complex> evaluate_on_ring(std::span<const Complex> coeffs, double r, int M) {
  if (M < 1) throw InvalidArgument("ring evaluation needs at least one point");
  std::vector<Complex> buf(M, Complex(0.0));
  double rm = 1.0;
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    buf[m % M] += coeffs[m] * rm;
    rm *= r;
    if (rm == 0.0) break;
  }
  fft_inverse(buf);
  return buf;
}

}  // namespace dirlab
